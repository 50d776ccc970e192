//! Closure of finitely generated groups given by a multiplication.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// All products of `gens`, breadth first from `identity`.
pub fn closure<T, F>(gens: &[T], identity: T, mul: F, max_order: usize) -> Result<Vec<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut seen = HashSet::from([identity.clone()]);
    let mut elements = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                if elements.len() == max_order {
                    return Err(Error::ClosureTooLarge { max_order });
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(elements)
}

/// Order of `x`, or `None` if it exceeds `max`.
pub fn element_order<T, F>(x: &T, identity: &T, mul: F, max: u64) -> Option<u64>
where
    T: Clone + Eq,
    F: Fn(&T, &T) -> T,
{
    let mut y = x.clone();
    for k in 1..=max {
        if &y == identity {
            return Some(k);
        }
        y = mul(&y, x);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub order: usize,
    /// Element order -> number of elements of that order.
    pub element_orders: BTreeMap<u64, usize>,
    pub cyclic: bool,
    /// Order 10, the first two generators have orders 5 and 2, and
    /// `a b a = b`.
    pub dihedral_d5: bool,
}

pub fn group_report<T, F>(gens: &[T], identity: T, mul: F, max_order: usize) -> Result<GroupReport>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let elements = closure(gens, identity.clone(), &mul, max_order)?;
    let order = elements.len();
    let mut element_orders = BTreeMap::new();
    for x in &elements {
        let k = element_order(x, &identity, &mul, order as u64).expect("element orders divide the group order");
        *element_orders.entry(k).or_insert(0) += 1;
    }
    let cyclic = element_orders.contains_key(&(order as u64));
    let dihedral_d5 = order == 10
        && gens.len() >= 2
        && element_order(&gens[0], &identity, &mul, 10) == Some(5)
        && element_order(&gens[1], &identity, &mul, 10) == Some(2)
        && mul(&mul(&gens[0], &gens[1]), &gens[0]) == gens[1];
    Ok(GroupReport { order, element_orders, cyclic, dihedral_d5 })
}
