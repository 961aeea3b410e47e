//! Torus-fixed components of `R_d`.
//!
//! A fixed quotient of `O^4` splits as two trivial summands `O` at a pair of
//! coordinates `(k, l)` and torsion sheaves of degrees `b` and `a` at the two
//! remaining coordinates. Each such choice is a good partition
//! `2t + 2 + d = (t+1) + (t+1) + b + a` and its component is
//! `Hilb^b x Hilb^a = P^b x P^a`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weights must be strictly increasing, got {0:?}")]
    NotStrictlyIncreasing([i64; 4]),
    #[error("expected exactly four comma-separated weights, got {0}")]
    WrongCount(usize),
    #[error("invalid weight {0:?}: not an integer")]
    Parse(String),
}

/// Integral weights `w0 < w1 < w2 < w3` of the diagonal `C*` action on `C^4`.
///
/// Strict increase makes every difference `w_i - w_j` (`i != j`) nonzero,
/// which is all the genericity the residue computation needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightVector([i64; 4]);

impl WeightVector {
    pub fn new(w: [i64; 4]) -> Result<Self, WeightError> {
        if w.windows(2).all(|p| p[0] < p[1]) {
            Ok(Self(w))
        } else {
            Err(WeightError::NotStrictlyIncreasing(w))
        }
    }

    pub fn standard() -> Self {
        Self([0, 1, 2, 3])
    }

    pub fn as_array(&self) -> [i64; 4] {
        self.0
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Default for WeightVector {
    fn default() -> Self {
        Self::standard()
    }
}

impl FromStr for WeightVector {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(WeightError::WrongCount(parts.len()));
        }
        let mut w = [0i64; 4];
        for (slot, p) in w.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| WeightError::Parse(p.to_string()))?;
        }
        Self::new(w)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a},{b},{c},{d}")
    }
}

/// What sits at one of the four coordinates of a fixed quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// Torsion of degree `b`, parametrized by the `P^b` factor.
    TorsionB(u32),
    /// Torsion of degree `a`, parametrized by the `P^a` factor.
    TorsionA(u32),
    /// Trivial rank-one summand, Hilbert polynomial `t + 1`.
    Trivial,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::TorsionB(b) => write!(f, "b:{b}"),
            Slot::TorsionA(a) => write!(f, "a:{a}"),
            Slot::Trivial => write!(f, "t+1"),
        }
    }
}

/// One torus-fixed component `P^b x P^a`, in canonical form.
///
/// Canonical means `b >= a`, and `pos_b < pos_a` whenever `b == a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedComponent {
    // field order gives the (b, pos_b, pos_a) sort for a fixed d
    d: u32,
    b: u32,
    pos_b: usize,
    pos_a: usize,
    a: u32,
}

impl FixedComponent {
    /// Returns `None` unless the data is a canonical component.
    pub fn new(pos_b: usize, pos_a: usize, b: u32, a: u32) -> Option<Self> {
        let canonical =
            pos_b < 4 && pos_a < 4 && pos_b != pos_a && b >= a && (b > a || pos_b < pos_a);
        canonical.then_some(Self {
            d: b + a,
            b,
            pos_b,
            pos_a,
            a,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn pos_b(&self) -> usize {
        self.pos_b
    }

    pub fn pos_a(&self) -> usize {
        self.pos_a
    }

    /// The two coordinates carrying trivial summands, ascending.
    pub fn trivial(&self) -> (usize, usize) {
        let mut rest = (0..4).filter(|&p| p != self.pos_b && p != self.pos_a);
        let k = rest.next().expect("two free positions");
        let l = rest.next().expect("two free positions");
        (k, l)
    }

    /// First kind: the whole torsion sits at one coordinate and the locus is `P^d`.
    pub fn is_first_kind(&self) -> bool {
        self.a == 0
    }

    /// Series caps of the component's Chow ring, `(b, a)`.
    pub fn caps(&self) -> (usize, usize) {
        (self.b as usize, self.a as usize)
    }

    pub fn pattern(&self) -> [Slot; 4] {
        let mut p = [Slot::Trivial; 4];
        p[self.pos_b] = Slot::TorsionB(self.b);
        p[self.pos_a] = Slot::TorsionA(self.a);
        p
    }

    /// Human-readable fixed locus, e.g. `P^2 x P^1`, `P^3`, or `pt`.
    pub fn fixed_locus(&self) -> String {
        match (self.b, self.a) {
            (0, 0) => "pt".to_string(),
            (b, 0) => format!("P^{b}"),
            (b, a) => format!("P^{b} x P^{a}"),
        }
    }
}

impl fmt::Display for FixedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p0, p1, p2, p3] = self.pattern();
        write!(f, "({p0},{p1},{p2},{p3})")
    }
}

/// All fixed components of `R_d`, sorted by `(b, pos_b, pos_a)`.
///
/// There are `6 (d + 1)` of them: six choices of trivial pair, times the
/// `d + 1` ordered ways of distributing the torsion degree over the other two
/// coordinates.
pub fn enumerate_components(d: u32) -> Vec<FixedComponent> {
    let mut out = Vec::with_capacity(6 * (d as usize + 1));
    for k in 0..4 {
        for l in (k + 1)..4 {
            let mut free = (0..4).filter(|&p| p != k && p != l);
            let p = free.next().unwrap();
            let q = free.next().unwrap();
            for deg_p in 0..=d {
                let deg_q = d - deg_p;
                let c = if deg_p >= deg_q {
                    FixedComponent::new(p, q, deg_p, deg_q)
                } else {
                    FixedComponent::new(q, p, deg_q, deg_p)
                };
                out.push(c.expect("canonical by construction"));
            }
        }
    }
    out.sort();
    out
}

/// `chi(R_d) = C(4,2) * C(d+3, 3)`.
pub fn euler_characteristic(d: u32) -> u64 {
    let n = d as u64 + 3;
    6 * (n * (n - 1) * (n - 2) / 6)
}

/// Rank of `A*(P^b x P^a)`, i.e. `(b+1)(a+1)`.
pub fn chow_rank(c: &FixedComponent) -> u64 {
    (c.b as u64 + 1) * (c.a as u64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn count_type(cs: &[FixedComponent], b: u32, a: u32) -> usize {
        cs.iter().filter(|c| c.b() == b && c.a() == a).count()
    }

    #[test]
    fn degree_three_has_24_components() {
        let cs = enumerate_components(3);
        assert_eq!(cs.len(), 24);
        assert_eq!(count_type(&cs, 3, 0), 12);
        assert_eq!(count_type(&cs, 2, 1), 12);
    }

    #[test]
    fn degree_zero_components_are_points() {
        let cs = enumerate_components(0);
        assert_eq!(cs.len(), 6);
        assert!(cs
            .iter()
            .all(|c| c.caps() == (0, 0) && c.fixed_locus() == "pt"));
    }

    #[test]
    fn degree_four_counts_the_symmetric_type_once_per_pair() {
        let cs = enumerate_components(4);
        assert_eq!(cs.len(), 30);
        assert_eq!(count_type(&cs, 4, 0), 12);
        assert_eq!(count_type(&cs, 3, 1), 12);
        assert_eq!(count_type(&cs, 2, 2), 6);
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(euler_characteristic(3), 120);
        assert_eq!(euler_characteristic(0), 6);
        assert_eq!(euler_characteristic(4), 210);
    }

    #[test]
    fn chow_rank_examples() {
        assert_eq!(chow_rank(&FixedComponent::new(0, 1, 2, 1).unwrap()), 6);
        assert_eq!(chow_rank(&FixedComponent::new(0, 1, 3, 0).unwrap()), 4);
        assert_eq!(chow_rank(&FixedComponent::new(0, 1, 0, 0).unwrap()), 1);
    }

    #[test]
    fn ranks_sum_to_euler_characteristic() {
        for d in 0..=50 {
            let cs = enumerate_components(d);
            assert_eq!(cs.len(), 6 * (d as usize + 1));
            let total: u64 = cs.iter().map(chow_rank).sum();
            assert_eq!(total, euler_characteristic(d), "d = {d}");
        }
    }

    #[test]
    fn components_are_distinct_and_sorted() {
        for d in 0..=8 {
            let cs = enumerate_components(d);
            let set: HashSet<_> = cs.iter().collect();
            assert_eq!(set.len(), cs.len());
            assert!(cs
                .windows(2)
                .all(|w| (w[0].b(), w[0].pos_b(), w[0].pos_a())
                    < (w[1].b(), w[1].pos_b(), w[1].pos_a())));
            for c in &cs {
                let (k, l) = c.trivial();
                assert!(k < l);
                assert!(![k, l].contains(&c.pos_b()) && ![k, l].contains(&c.pos_a()));
                assert_eq!(c.b() + c.a(), d);
            }
        }
    }

    #[test]
    fn non_canonical_components_are_rejected() {
        assert!(FixedComponent::new(0, 1, 1, 2).is_none());
        assert!(FixedComponent::new(1, 0, 2, 2).is_none());
        assert!(FixedComponent::new(2, 2, 3, 0).is_none());
        assert!(FixedComponent::new(0, 4, 3, 0).is_none());
        assert!(FixedComponent::new(0, 1, 2, 2).is_some());
    }

    #[test]
    fn pattern_and_display() {
        let c = FixedComponent::new(1, 0, 2, 1).unwrap();
        assert_eq!(c.to_string(), "(a:1,b:2,t+1,t+1)");
        assert_eq!(c.trivial(), (2, 3));
        assert_eq!(c.fixed_locus(), "P^2 x P^1");
    }

    #[test]
    fn weight_parsing() {
        assert_eq!(
            "0,1,2,3".parse::<WeightVector>().unwrap(),
            WeightVector::standard()
        );
        assert_eq!(
            "-3, 0, 2, 11".parse::<WeightVector>().unwrap().as_array(),
            [-3, 0, 2, 11]
        );
        let err = "0,1,2,2".parse::<WeightVector>().unwrap_err();
        assert!(err
            .to_string()
            .contains("weights must be strictly increasing"));
        assert_eq!(
            "0,1,2".parse::<WeightVector>(),
            Err(WeightError::WrongCount(3))
        );
        assert!(matches!(
            "0,1,x,3".parse::<WeightVector>(),
            Err(WeightError::Parse(_))
        ));
    }
}
