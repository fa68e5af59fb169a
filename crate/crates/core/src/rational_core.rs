//! Exact rational vectors and the moment-orthogonality solver behind every hash vector.
//!
//! A hash vector `tilde ∈ ℚⁿ` annihilates the moments `Σ_j tilde_j q_j^m` for each
//! exponent `m` in a constraint set, optionally keeping one forbidden moment nonzero.
//! All arithmetic here is exact; floating point only appears in [`lift_hash`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational n-vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RationalVector(entries)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RationalVector(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn from_fracs(v: &[(i64, i64)]) -> Self {
        RationalVector(
            v.iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
    }

    /// Parse a comma separated list such as `1,-2/3,4`.
    pub fn parse_csv(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>>>()
            .map(RationalVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RationalVector) -> BigRational {
        assert_eq!(self.len(), other.len(), "dot of unequal lengths");
        self.0
            .iter()
            .zip(&other.0)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &BigRational) -> RationalVector {
        RationalVector(self.0.iter().map(|a| a * c).collect())
    }

    /// Componentwise product.
    pub fn wedge(&self, other: &RationalVector) -> RationalVector {
        assert_eq!(self.len(), other.len(), "wedge of unequal lengths");
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    /// Componentwise power; negative exponents need nonzero entries.
    pub fn powi(&self, m: i64) -> RationalVector {
        RationalVector(self.0.iter().map(|a| rational_pow(a, m)).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }

    /// Scale so the first nonzero entry is +1. The zero vector is returned unchanged.
    pub fn normalized(&self) -> RationalVector {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(lead) => {
                let inv = lead.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Smallest integer multiple with the same sign pattern (denominators cleared,
    /// common factor removed).
    pub fn integerize(&self) -> Vec<BigInt> {
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|x| x.to_string()).collect()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(RationalVector)
            .map_err(serde::de::Error::custom)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Config(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(p, q))
    } else if let Ok(i) = BigInt::from_str(s) {
        Ok(BigRational::from_integer(i))
    } else {
        // terminating decimals such as 0.25 are exact rationals too
        let (int, frac) = s.split_once('.').ok_or_else(bad)?;
        let neg = int.trim_start().starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        Ok(if neg { -r } else { r })
    }
}

pub fn rational_pow(a: &BigRational, m: i64) -> BigRational {
    if m >= 0 {
        num_traits::pow(a.clone(), m as usize)
    } else {
        num_traits::pow(a.recip(), m.unsigned_abs() as usize)
    }
}

/// Nearest double; exact for values representable in f64.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both parts down to avoid overflow.
    let shift = x.numer().bits().max(x.denom().bits()) as i64 - 1000;
    let n = (x.numer() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
    let d = (x.denom() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Basis of the exact right nullspace of `rows` (each of length `ncols`), one vector per
/// free column of the reduced row echelon form, in increasing free-column order.
pub fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<RationalVector> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            RationalVector(v)
        })
        .collect()
}

/// Exact rank by the same elimination.
pub fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    ncols - nullspace(rows, ncols).len()
}

/// Exact determinant of a square matrix by Gaussian elimination over ℚ.
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let sub = &f * &a[c][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

/// A solved hash vector with its constraint ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashVector {
    pub tilde: RationalVector,
    pub nodes: RationalVector,
    pub lifted: Option<Vec<f64>>,
    pub satisfied_exponents: BTreeSet<i64>,
    pub forbidden_exponent: Option<i64>,
    #[serde(with = "opt_rational")]
    pub forbidden_value: Option<BigRational>,
}

impl HashVector {
    /// Σ_j tilde_j q_j^m, exactly.
    pub fn moment(&self, m: i64) -> BigRational {
        self.tilde.dot(&self.nodes.powi(m))
    }

    /// (exponent, moment) for every constrained exponent, then the forbidden one.
    pub fn checks(&self) -> Vec<(i64, BigRational)> {
        let mut out: Vec<(i64, BigRational)> = self
            .satisfied_exponents
            .iter()
            .map(|&m| (m, self.moment(m)))
            .collect();
        if let Some(e) = self.forbidden_exponent {
            out.push((e, self.moment(e)));
        }
        out
    }
}

mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<BigRational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|x| x.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigRational>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

fn check_nodes(q: &RationalVector) -> Result<()> {
    for (i, x) in q.0.iter().enumerate() {
        if x.is_zero() || q.0[..i].contains(x) {
            return Err(Error::BadNodes(i));
        }
    }
    Ok(())
}

/// Solve Σ_j tilde_j q_j^m = 0 for m ∈ `exponents`, keeping Σ_j tilde_j q_j^{e*} ≠ 0
/// when `forbidden` is given. The first kernel basis vector that keeps the forbidden
/// moment alive is returned, scaled so its first nonzero entry is +1.
pub fn solve_moment_orthogonal(
    q: &RationalVector,
    exponents: &[i64],
    forbidden: Option<i64>,
) -> Result<HashVector> {
    check_nodes(q)?;
    let exps: BTreeSet<i64> = exponents.iter().copied().collect();
    let n = q.len();
    if exps.len() > n.saturating_sub(1) {
        return Err(Error::TooManyConstraints {
            constraints: exps.len(),
            n,
        });
    }
    let rows: Vec<Vec<BigRational>> = exps.iter().map(|&m| q.powi(m).0).collect();
    let basis = nullspace(&rows, n);
    if basis.is_empty() {
        return Err(Error::Infeasible);
    }
    let chosen = match forbidden {
        None => basis[0].clone(),
        Some(e) => {
            let probe = q.powi(e);
            // Moments are linear, so if every basis vector kills q^e the whole kernel does.
            basis
                .iter()
                .find(|v| !v.dot(&probe).is_zero())
                .cloned()
                .ok_or(Error::ForbiddenMomentUnavoidable(e))?
        }
    };
    let tilde = chosen.normalized();
    let forbidden_value = forbidden.map(|e| tilde.dot(&q.powi(e)));
    Ok(HashVector {
        tilde,
        nodes: q.clone(),
        lifted: None,
        satisfied_exponents: exps,
        forbidden_exponent: forbidden,
        forbidden_value,
    })
}

/// #_j = tilde_j / a_j².
pub fn lift_hash(h: &HashVector, a: &[f64]) -> Result<Vec<f64>> {
    if a.len() != h.tilde.len() {
        return Err(Error::Dimension(format!(
            "scale has {} entries, hash has {}",
            a.len(),
            h.tilde.len()
        )));
    }
    if let Some(i) = a.iter().position(|&x| x == 0.0) {
        return Err(Error::ZeroScale(i));
    }
    Ok(h.tilde
        .to_f64()
        .iter()
        .zip(a)
        .map(|(t, a)| t / (a * a))
        .collect())
}

/// Exact lift for rational scales.
pub fn lift_hash_exact(h: &HashVector, a: &RationalVector) -> Result<RationalVector> {
    if let Some(i) = a.0.iter().position(Zero::is_zero) {
        return Err(Error::ZeroScale(i));
    }
    Ok(RationalVector(
        h.tilde
            .0
            .iter()
            .zip(&a.0)
            .map(|(t, a)| t / (a * a))
            .collect(),
    ))
}

/// Exact values of the three constraint families for the subspace construction with
/// rows α¹ = a, α^m = a·q^m (2 ≤ m ≤ d), β¹ = a·q^{-1}, where a_j = 1/(q_j + c·q_j²).
#[derive(Debug, Clone)]
pub struct FamilyLedger {
    pub hash: RationalVector,
    /// Σ#α^m and Σ#β¹ for every row.
    pub linear: Vec<BigRational>,
    /// Σ#α^nα^m over n ≤ m, and Σ#β¹β¹.
    pub quadratic: Vec<BigRational>,
    /// Σ#α^mβ¹ for m = 1..d; the first one is the coupling constant.
    pub coupling: Vec<BigRational>,
}

impl FamilyLedger {
    pub fn coupling_constant(&self) -> &BigRational {
        &self.coupling[0]
    }

    pub fn holds(&self) -> bool {
        self.linear.iter().all(Zero::is_zero)
            && self.quadratic.iter().all(Zero::is_zero)
            && self.coupling[1..].iter().all(Zero::is_zero)
            && self.coupling[0].is_positive()
    }
}

/// Solve the moment system with E = {−2, 0, 1, …, 2d} and forbidden exponent −1, lift
/// it exactly through a_j = 1/(q_j + c q_j²), orient it so the coupling is positive,
/// and evaluate every constraint family.
pub fn subspace_hash_families(
    q: &RationalVector,
    c: &BigRational,
    d: usize,
) -> Result<FamilyLedger> {
    let d = d.max(1);
    let mut exps = vec![-2i64, 0];
    exps.extend(1..=(2 * d as i64));
    let h = solve_moment_orthogonal(q, &exps, Some(-1))?;
    let n = q.len();
    let mut a = Vec::with_capacity(n);
    for (j, qj) in q.0.iter().enumerate() {
        let den = qj + c * qj * qj;
        if den.is_zero() {
            return Err(Error::Pole(j));
        }
        a.push(den.recip());
    }
    let a = RationalVector(a);
    let mut hash = lift_hash_exact(&h, &a)?;
    let mut alphas = vec![a.clone()];
    for m in 2..=d as i64 {
        alphas.push(a.wedge(&q.powi(m)));
    }
    let beta = a.wedge(&q.powi(-1));
    if hash.dot(&alphas[0].wedge(&beta)).is_negative() {
        hash = hash.scale(&-BigRational::one());
    }
    let mut linear: Vec<BigRational> = alphas.iter().map(|r| hash.dot(r)).collect();
    linear.push(hash.dot(&beta));
    let mut quadratic = Vec::new();
    for i in 0..alphas.len() {
        for j in i..alphas.len() {
            quadratic.push(hash.dot(&alphas[i].wedge(&alphas[j])));
        }
    }
    quadratic.push(hash.dot(&beta.wedge(&beta)));
    let coupling = alphas.iter().map(|r| hash.dot(&r.wedge(&beta))).collect();
    Ok(FamilyLedger {
        hash,
        linear,
        quadratic,
        coupling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    /// Cross product of (1,1,1) and q: the symbolic determinant for three nodes.
    fn cross_oracle(q: &[i64; 3]) -> RationalVector {
        RationalVector::from_ints(&[q[2] - q[1], q[0] - q[2], q[1] - q[0]])
    }

    #[test]
    fn three_nodes_reproduce_second_difference() {
        let q = RationalVector::from_ints(&[1, 2, 3]);
        let h = solve_moment_orthogonal(&q, &[0, 1], Some(2)).unwrap();
        assert_eq!(h.tilde, RationalVector::from_ints(&[1, -2, 1]));
        assert!(h.moment(0).is_zero());
        assert!(h.moment(1).is_zero());
        assert_eq!(h.moment(2), r(2, 1));
        assert_eq!(h.forbidden_value, Some(r(2, 1)));
    }

    #[test]
    fn empty_constraints_give_first_unit_vector() {
        let q = RationalVector::from_ints(&[1, 2]);
        let h = solve_moment_orthogonal(&q, &[], Some(0)).unwrap();
        assert_eq!(h.tilde, RationalVector::from_ints(&[1, 0]));
    }

    #[test]
    fn five_nodes_with_negative_exponents() {
        let q = RationalVector::from_ints(&[1, 2, 3, 4, 5]);
        let h = solve_moment_orthogonal(&q, &[-2, 0, 1, 2], Some(-1)).unwrap();
        // Frozen from an independent symbolic nullspace computation.
        assert_eq!(
            h.tilde,
            RationalVector::from_fracs(&[(1, 1), (-856, 77), (2106, 77), (-1952, 77), (625, 77)])
        );
        for m in [-2, 0, 1, 2] {
            assert!(h.moment(m).is_zero());
        }
        assert_eq!(h.forbidden_value, Some(r(-12, 77)));
        let rows: Vec<Vec<BigRational>> = [-2i64, 0, 1, 2].iter().map(|&m| q.powi(m).0).collect();
        assert_eq!(nullspace(&rows, 5).len(), 1);
    }

    #[test]
    fn lifting_through_dilated_scales() {
        let q = RationalVector::from_ints(&[1, 2, 3]);
        let h = solve_moment_orthogonal(&q, &[0, 1], None).unwrap();
        let lifted = lift_hash(&h, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(lifted, vec![1.0, -2.0, 1.0]);
        let a = RationalVector::from_ints(&[6, 3, 2]);
        let exact = lift_hash_exact(&h, &a).unwrap();
        assert_eq!(exact, RationalVector::from_fracs(&[(1, 36), (-2, 9), (1, 4)]));
        assert!(exact.dot(&a).is_zero());
        assert!(exact.dot(&a.wedge(&a)).is_zero());
        assert_eq!(lift_hash(&h, &[1.0, 0.0, 1.0]), Err(Error::ZeroScale(1)));
    }

    #[test]
    fn rejects_bad_nodes_and_overdetermined_systems() {
        let q = RationalVector::from_ints(&[1, 2, 2]);
        assert_eq!(
            solve_moment_orthogonal(&q, &[0], None),
            Err(Error::BadNodes(2))
        );
        let q = RationalVector::from_ints(&[0, 2, 3]);
        assert_eq!(
            solve_moment_orthogonal(&q, &[0], None),
            Err(Error::BadNodes(0))
        );
        let q = RationalVector::from_ints(&[1, 2, 3]);
        assert!(matches!(
            solve_moment_orthogonal(&q, &[0, 1, 2], None),
            Err(Error::TooManyConstraints { .. })
        ));
    }

    #[test]
    fn forbidden_moment_inside_the_constraint_span_is_reported() {
        // With E = {0,1} the kernel is spanned by (1,-2,1); every vector kills q^0.
        let q = RationalVector::from_ints(&[1, 2, 3]);
        assert_eq!(
            solve_moment_orthogonal(&q, &[0, 1], Some(0)),
            Err(Error::ForbiddenMomentUnavoidable(0))
        );
    }

    #[test]
    fn integerize_clears_denominators() {
        let v = RationalVector::from_fracs(&[(1, 36), (-2, 9), (1, 4)]);
        let ints: Vec<i64> = v.integerize().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(ints, vec![1, -8, 9]);
    }

    #[test]
    fn parses_fractions_and_decimals() {
        let v = RationalVector::parse_csv("1, -2/3, 0.25").unwrap();
        assert_eq!(v, RationalVector::from_fracs(&[(1, 1), (-2, 3), (1, 4)]));
        assert!(RationalVector::parse_csv("1,x").is_err());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = vec![
            vec![r(2, 1), r(1, 2), r(0, 1)],
            vec![r(1, 1), r(3, 1), r(-1, 1)],
            vec![r(0, 1), r(4, 1), r(5, 1)],
        ];
        // 2(15+4) - 1/2(5-0) + 0
        assert_eq!(determinant(&m), r(71, 2));
    }

    #[test]
    fn subspace_families_hold_for_two_normals() {
        let q = RationalVector::from_ints(&[1, 2, 3, 4, 5, 6, 7]);
        let ledger = subspace_hash_families(&q, &r(1, 10), 2).unwrap();
        assert!(ledger.holds(), "{ledger:?}");
        assert!(ledger.coupling_constant().is_positive());
    }

    proptest! {
        #[test]
        fn three_node_solution_is_parallel_to_cross_product(
            a in -20i64..20, b in -20i64..20, c in -20i64..20
        ) {
            prop_assume!(a != 0 && b != 0 && c != 0 && a != b && b != c && a != c);
            let q = RationalVector::from_ints(&[a, b, c]);
            let h = solve_moment_orthogonal(&q, &[0, 1], None).unwrap();
            prop_assert_eq!(h.tilde.clone(), cross_oracle(&[a, b, c]).normalized());
        }

        #[test]
        fn moments_vanish_exactly_and_scaling_is_harmless(
            qs in proptest::collection::btree_set(-30i64..30, 5..8),
            num in 1i64..9, den in 1i64..9
        ) {
            let qs: Vec<i64> = qs.into_iter().filter(|&x| x != 0).collect();
            prop_assume!(qs.len() >= 5);
            let q = RationalVector::from_ints(&qs);
            let exps = [-2, 0, 1, 2];
            let h = solve_moment_orthogonal(&q, &exps, Some(-1)).unwrap();
            for m in exps {
                prop_assert!(h.moment(m).is_zero());
            }
            prop_assert!(!h.moment(-1).is_zero());
            let scaled = h.tilde.scale(&r(num, den));
            for m in exps {
                prop_assert!(scaled.dot(&q.powi(m)).is_zero());
            }
            prop_assert_eq!(scaled.normalized(), h.tilde);
        }
    }
}
