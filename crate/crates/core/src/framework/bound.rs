use std::cmp::Ordering;
use std::fmt;

/// Asymptotic upper bound; `Unknown` absorbs everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Const,
    /// `O(n^k)` with `k ≥ 1`.
    Poly(u32),
    Unknown,
}

impl Bound {
    /// `Poly(0)` normalizes to `Const`.
    pub fn poly(k: u32) -> Bound {
        if k == 0 {
            Bound::Const
        } else {
            Bound::Poly(k)
        }
    }

    /// Degree with `Const` as 0; `None` for `Unknown`.
    pub fn degree(self) -> Option<u32> {
        match self {
            Bound::Const => Some(0),
            Bound::Poly(k) => Some(k),
            Bound::Unknown => None,
        }
    }

    /// Bound of a sum.
    pub fn combine(self, other: Bound) -> Bound {
        match (self.degree(), other.degree()) {
            (Some(a), Some(b)) => Bound::poly(a.max(b)),
            _ => Bound::Unknown,
        }
    }

    pub fn sum(bounds: impl IntoIterator<Item = Bound>) -> Bound {
        bounds.into_iter().fold(Bound::Const, Bound::combine)
    }

    /// Competition-style verdict line.
    pub fn verdict(self) -> String {
        match self {
            Bound::Unknown => "MAYBE".into(),
            b => format!("YES(?,{b})"),
        }
    }

    pub fn parse_verdict(line: &str) -> Option<Bound> {
        if line == "MAYBE" {
            return Some(Bound::Unknown);
        }
        let inner = line.strip_prefix("YES(?,")?.strip_suffix(')')?;
        Bound::parse(inner)
    }

    pub fn parse(text: &str) -> Option<Bound> {
        match text {
            "O(1)" => Some(Bound::Const),
            "O(n)" => Some(Bound::Poly(1)),
            "?" => Some(Bound::Unknown),
            _ => {
                let k: u32 = text.strip_prefix("O(n^")?.strip_suffix(')')?.parse().ok()?;
                (k >= 1).then_some(Bound::Poly(k))
            }
        }
    }
}

/// Tighter bounds are smaller; `Unknown` is the largest.
impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |b: &Bound| b.degree().map_or(u64::MAX, u64::from);
        key(self).cmp(&key(other))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Const => write!(f, "O(1)"),
            Bound::Poly(1) => write!(f, "O(n)"),
            Bound::Poly(k) => write!(f, "O(n^{k})"),
            Bound::Unknown => write!(f, "?"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        assert_eq!(Bound::Const.combine(Bound::Poly(2)), Bound::Poly(2));
        assert_eq!(Bound::Poly(3).combine(Bound::Poly(2)), Bound::Poly(3));
        assert_eq!(Bound::Poly(1).combine(Bound::Unknown), Bound::Unknown);
        assert_eq!(Bound::sum([]), Bound::Const);
        assert_eq!(Bound::poly(0), Bound::Const);
        assert!(Bound::Const < Bound::Poly(1) && Bound::Poly(7) < Bound::Unknown);
    }

    #[test]
    fn verdicts() {
        assert_eq!(Bound::Poly(2).verdict(), "YES(?,O(n^2))");
        assert_eq!(Bound::Poly(1).verdict(), "YES(?,O(n))");
        assert_eq!(Bound::Const.verdict(), "YES(?,O(1))");
        assert_eq!(Bound::Unknown.verdict(), "MAYBE");
        for b in [Bound::Const, Bound::Poly(1), Bound::Poly(4), Bound::Unknown] {
            assert_eq!(Bound::parse_verdict(&b.verdict()), Some(b));
        }
        assert_eq!(Bound::parse("O(n^0)"), None);
    }
}
