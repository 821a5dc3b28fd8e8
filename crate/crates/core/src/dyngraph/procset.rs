//! Process identifiers and compact process sets.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported system size. Process sets are single 128-bit masks.
pub const MAX_PROCESSES: usize = 128;

/// 1-based process identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pid(pub u32);

impl Pid {
    /// Zero-based slot used for indexing per-process tables.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(i: usize) -> Self {
        Pid(i as u32 + 1)
    }
}

impl fmt::Display for Pid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Set of processes, bit `i` standing for `Pid(i + 1)`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcSet(u128);

impl ProcSet {
    pub const EMPTY: ProcSet = ProcSet(0);

    pub fn singleton(p: Pid) -> Self {
        ProcSet(1u128 << p.index())
    }

    /// The set {1, ..., n}.
    pub fn full(n: usize) -> Self {
        if n >= MAX_PROCESSES {
            ProcSet(u128::MAX)
        } else {
            ProcSet((1u128 << n) - 1)
        }
    }

    pub fn from_bits(bits: u128) -> Self {
        ProcSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, p: Pid) -> bool {
        self.0 >> p.index() & 1 == 1
    }

    pub fn insert(&mut self, p: Pid) {
        self.0 |= 1u128 << p.index();
    }

    pub fn remove(&mut self, p: Pid) {
        self.0 &= !(1u128 << p.index());
    }

    pub fn union(self, other: ProcSet) -> ProcSet {
        ProcSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ProcSet) -> ProcSet {
        ProcSet(self.0 & other.0)
    }

    pub fn difference(self, other: ProcSet) -> ProcSet {
        ProcSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ProcSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: ProcSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<Pid> {
        if self.0 == 0 {
            None
        } else {
            Some(Pid::from_index(self.0.trailing_zeros() as usize))
        }
    }

    /// Members in increasing id order.
    pub fn iter(self) -> impl Iterator<Item = Pid> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Pid::from_index(i))
        })
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().map(|p| p.0).collect()
    }
}

impl FromIterator<Pid> for ProcSet {
    fn from_iter<I: IntoIterator<Item = Pid>>(iter: I) -> Self {
        let mut s = ProcSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl fmt::Debug for ProcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|p| p.0)).finish()
    }
}

impl fmt::Display for ProcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p.0)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ProcSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|p| p.0))
    }
}

impl<'de> Deserialize<'de> for ProcSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ids = Vec::<u32>::deserialize(d)?;
        let mut s = ProcSet::EMPTY;
        for id in ids {
            if id == 0 || id as usize > MAX_PROCESSES {
                return Err(serde::de::Error::custom(format!("process id {id} out of range")));
            }
            s.insert(Pid(id));
        }
        Ok(s)
    }
}

/// Shorthand for building a set from raw ids.
pub fn procs(ids: &[u32]) -> ProcSet {
    ids.iter().map(|&i| Pid(i)).collect()
}
