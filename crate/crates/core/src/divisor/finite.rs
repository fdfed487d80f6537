use std::collections::BTreeMap;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::PointOrInfinity;

/// Finitely supported integer combination of places.
///
/// Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FiniteDivisor {
    entries: BTreeMap<PointOrInfinity, BigInt>,
}

impl FiniteDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (PointOrInfinity, BigInt)>,
    {
        let mut div = Self::new();
        for (q, v) in entries {
            div.add_at(q, &v);
        }
        div
    }

    pub fn add_at(&mut self, q: PointOrInfinity, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry(q);
        match slot {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, q: &PointOrInfinity) -> BigInt {
        self.entries.get(q).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PointOrInfinity, &BigInt)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &PointOrInfinity> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degree(&self) -> BigInt {
        self.entries.values().sum()
    }

    pub fn scale(&self, k: u64) -> Self {
        if k == 0 {
            return Self::new();
        }
        let k = BigInt::from(k);
        FiniteDivisor {
            entries: self
                .entries
                .iter()
                .map(|(q, v)| (q.clone(), v * &k))
                .collect(),
        }
    }

    /// Entrywise `self ≤ other`.
    pub fn leq(&self, other: &FiniteDivisor) -> bool {
        let zero = BigInt::zero();
        self.entries
            .iter()
            .all(|(q, v)| v <= other.entries.get(q).unwrap_or(&zero))
            && other
                .entries
                .iter()
                .all(|(q, v)| self.entries.contains_key(q) || *v >= zero)
    }

    pub fn is_effective(&self) -> bool {
        self.entries.values().all(|v| *v > BigInt::zero())
    }
}

impl Add for &FiniteDivisor {
    type Output = FiniteDivisor;

    fn add(self, rhs: &FiniteDivisor) -> FiniteDivisor {
        let mut out = self.clone();
        for (q, v) in &rhs.entries {
            out.add_at(q.clone(), v);
        }
        out
    }
}
