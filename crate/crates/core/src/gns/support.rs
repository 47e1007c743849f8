//! Supports at component granularity, refined by point and zero-section tags.

use std::collections::BTreeSet;
use std::fmt;

/// Where a functional or GNS vector lives.
///
/// Ordered `Empty ≤ Point ≤ ZeroSection ≤ Components ≤ Full` on the same
/// components. `Components` holding every component is normalized to `Full`
/// by [`SupportDescriptor::normalize`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SupportDescriptor {
    Empty,
    Point { component: usize, coords: Vec<String> },
    ZeroSection(BTreeSet<usize>),
    Components(BTreeSet<usize>),
    Full,
}

impl SupportDescriptor {
    fn rank(&self) -> u8 {
        match self {
            SupportDescriptor::Empty => 0,
            SupportDescriptor::Point { .. } => 1,
            SupportDescriptor::ZeroSection(_) => 2,
            SupportDescriptor::Components(_) | SupportDescriptor::Full => 3,
        }
    }

    /// Component set touched by the support on an `m`-component chart.
    pub fn components(&self, m: usize) -> BTreeSet<usize> {
        match self {
            SupportDescriptor::Empty => BTreeSet::new(),
            SupportDescriptor::Point { component, .. } => [*component].into(),
            SupportDescriptor::ZeroSection(s) | SupportDescriptor::Components(s) => s.clone(),
            SupportDescriptor::Full => (0..m).collect(),
        }
    }

    /// Canonical form: empty sets become `Empty`, all components `Full`.
    pub fn normalize(self, m: usize) -> Self {
        match self {
            SupportDescriptor::ZeroSection(s) | SupportDescriptor::Components(s) if s.is_empty() => {
                SupportDescriptor::Empty
            }
            SupportDescriptor::Components(s) if s.len() == m => SupportDescriptor::Full,
            other => other,
        }
    }

    fn with_components(&self, set: BTreeSet<usize>, m: usize) -> Self {
        let out = match self {
            SupportDescriptor::Empty => SupportDescriptor::Empty,
            SupportDescriptor::Point { component, coords } => {
                if set.contains(component) {
                    SupportDescriptor::Point { component: *component, coords: coords.clone() }
                } else {
                    SupportDescriptor::Empty
                }
            }
            SupportDescriptor::ZeroSection(_) => SupportDescriptor::ZeroSection(set),
            SupportDescriptor::Components(_) | SupportDescriptor::Full => SupportDescriptor::Components(set),
        };
        out.normalize(m)
    }

    pub fn leq(&self, other: &Self, m: usize) -> bool {
        let (a, b) = (self.components(m), other.components(m));
        if !a.is_subset(&b) {
            return false;
        }
        match (self, other) {
            (SupportDescriptor::Empty, _) => true,
            (SupportDescriptor::Point { component: c1, coords: x1 }, SupportDescriptor::Point { component: c2, coords: x2 }) => {
                c1 == c2 && x1 == x2
            }
            _ => self.rank() <= other.rank(),
        }
    }

    /// Smallest descriptor above both.
    pub fn join(&self, other: &Self, m: usize) -> Self {
        if self.leq(other, m) {
            return other.clone().normalize(m);
        }
        if other.leq(self, m) {
            return self.clone().normalize(m);
        }
        let set: BTreeSet<usize> = self.components(m).union(&other.components(m)).copied().collect();
        let top = if self.rank().max(other.rank()) <= 2 && self.rank() >= 2 && other.rank() >= 2 {
            SupportDescriptor::ZeroSection(set)
        } else {
            SupportDescriptor::Components(set)
        };
        top.normalize(m)
    }

    /// Largest descriptor below both.
    pub fn meet(&self, other: &Self, m: usize) -> Self {
        if self.leq(other, m) {
            return self.clone().normalize(m);
        }
        if other.leq(self, m) {
            return other.clone().normalize(m);
        }
        let set: BTreeSet<usize> = self.components(m).intersection(&other.components(m)).copied().collect();
        let low = if self.rank() <= other.rank() { self } else { other };
        if let (SupportDescriptor::Point { .. }, SupportDescriptor::Point { .. }) = (self, other) {
            return SupportDescriptor::Empty;
        }
        low.with_components(set, m)
    }

    /// Restrict to a set of components.
    pub fn meet_components(&self, set: &BTreeSet<usize>, m: usize) -> Self {
        let inter: BTreeSet<usize> = self.components(m).intersection(set).copied().collect();
        self.with_components(inter, m)
    }

    pub fn is_disjoint(&self, other: &Self, m: usize) -> bool {
        self.components(m).is_disjoint(&other.components(m))
    }
}

impl fmt::Display for SupportDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |s: &BTreeSet<usize>| s.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(",");
        match self {
            SupportDescriptor::Empty => write!(f, "empty"),
            SupportDescriptor::Point { component, coords } => {
                write!(f, "point(comp {}, ({}))", component + 1, coords.join(", "))
            }
            SupportDescriptor::ZeroSection(s) => write!(f, "zero-section{{{}}}", set(s)),
            SupportDescriptor::Components(s) => write!(f, "components{{{}}}", set(s)),
            SupportDescriptor::Full => write!(f, "full"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SupportDescriptor as S;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn chain_is_ordered() {
        let p = S::Point { component: 0, coords: vec!["0".into()] };
        let chain = [S::Empty, p, S::ZeroSection(set(&[0])), S::Components(set(&[0])), S::Full];
        for (i, a) in chain.iter().enumerate() {
            for (j, b) in chain.iter().enumerate() {
                assert_eq!(a.leq(b, 2), i <= j, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn normalization_and_lattice() {
        assert_eq!(S::Components(set(&[0, 1])).normalize(2), S::Full);
        assert_eq!(S::Components(set(&[])).normalize(2), S::Empty);
        let a = S::Components(set(&[0]));
        let b = S::Components(set(&[1]));
        assert_eq!(a.join(&b, 2), S::Full);
        assert_eq!(a.meet(&b, 2), S::Empty);
        assert!(a.is_disjoint(&b, 2));
        let z = S::ZeroSection(set(&[0, 1]));
        assert_eq!(z.meet_components(&set(&[1]), 2), S::ZeroSection(set(&[1])));
        assert_eq!(z.meet(&a, 2), S::ZeroSection(set(&[0])));
    }
}
