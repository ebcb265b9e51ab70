//! Laurent polynomials in `q`, the Jones polynomial as a Kauffman state sum,
//! and exact evaluation of the renormalized polynomial at `q = sqrt(-1)`.

use alloc::collections::BTreeMap;
use core::fmt;

use crate::diagram::PlanarDiagram;
use crate::homology::HomologyTable;
use crate::statecube::{resolve, CubeError, CubeLimits, KauffmanState};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `q + q^-1`.
    pub fn quantum_two() -> Self {
        Self::from_terms([(-1, 1), (1, 1)])
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in other.terms() {
            p.add_term(e, c);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                p.add_term(a + b, x * y);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::monomial(0, 1), |acc, _| acc.mul(self))
    }

    pub fn shift(&self, k: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e + k, c)))
    }

    /// `p(q^-1)`.
    pub fn invert_variable(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    /// Exact quotient by `q + q^-1`, or `None` if it does not divide.
    pub fn div_quantum_two(&self) -> Option<Self> {
        // long division from the top: q^e c = (q + q^-1) c q^(e-1) - c q^(e-2)
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(top) = rem.max_degree() {
            let c = rem.coeff(top);
            let low = rem.min_degree().unwrap_or(top);
            if top - 1 < low + 1 {
                return None;
            }
            quot.add_term(top - 1, c);
            rem.add_term(top, -c);
            rem.add_term(top - 2, -c);
        }
        Some(quot)
    }

    /// Value at `q = sqrt(-1)` as a Gaussian integer `(re, im)`.
    pub fn eval_at_i(&self) -> (i64, i64) {
        let mut re = 0;
        let mut im = 0;
        for (e, c) in self.terms() {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        (re, im)
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (k, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("q")?,
                (1, m) => write!(f, "{m}q")?,
                (e, 1) => write!(f, "q^{e}")?,
                (e, m) => write!(f, "{m}q^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JonesError {
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error("polynomial is not divisible by q + q^-1")]
    NotDivisible,
    #[error("|J~(i)|^2 = {0} is not a perfect square")]
    NotInteger(i64),
    #[error("|J~(1)| = {got}, expected 2^(c-1) = {want} for {components} components")]
    Normalization { got: i64, want: i64, components: u32 },
}

/// `sum_s (-1)^i(s) q^j(s) (q + q^-1)^|D_s|` over all Kauffman states.
pub fn state_sum_jones(d: &PlanarDiagram, limits: CubeLimits) -> Result<LaurentPolynomial, CubeError> {
    limits.check(d)?;
    let n = d.crossing_count();
    let q2 = LaurentPolynomial::quantum_two();
    let max_circles = n + d.unknots() as usize + 1;
    let powers: alloc::vec::Vec<LaurentPolynomial> = (0..=max_circles as u32).map(|k| q2.pow(k)).collect();
    let mut sum = LaurentPolynomial::zero();
    for s in 0..1u64 << n {
        let r = resolve(d, KauffmanState(s));
        let sign = if r.i.rem_euclid(2) == 0 { 1 } else { -1 };
        for (e, c) in powers[r.circle_count].terms() {
            sum.add_term(e + r.j, sign * c);
        }
    }
    Ok(sum)
}

/// `sum (-1)^i q^j rank(i, j)` of a homology table.
pub fn graded_euler(table: &HomologyTable) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for ((i, j), g) in table.entries() {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(j, sign * g.free_rank as i64);
    }
    p
}

/// `|J~(sqrt(-1))|` where `J~ = J / (q + q^-1)`. The value `|J~(1)|` is
/// checked against `2^(c-1)` to catch polynomials that are not link Jones
/// polynomials in this normalization.
pub fn reduced_eval_at_i(j: &LaurentPolynomial, components: u32) -> Result<u64, JonesError> {
    let reduced = j.div_quantum_two().ok_or(JonesError::NotDivisible)?;
    let want = 1i64 << components.saturating_sub(1);
    let got = reduced.eval_at_one().abs();
    if got != want {
        return Err(JonesError::Normalization {
            got,
            want,
            components,
        });
    }
    let (re, im) = reduced.eval_at_i();
    let norm = re * re + im * im;
    let root = isqrt(norm as u64);
    if root * root != norm as u64 {
        return Err(JonesError::NotInteger(norm));
    }
    Ok(root)
}

fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = (x + 1) / 2;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use alloc::string::ToString;

    fn jones(pd: &str) -> LaurentPolynomial {
        state_sum_jones(&parse_pd(pd).unwrap(), CubeLimits::default()).unwrap()
    }

    #[test]
    fn unknot_and_unlink() {
        let q2 = LaurentPolynomial::quantum_two();
        assert_eq!(jones("PD[]"), q2);
        assert_eq!(state_sum_jones(&PlanarDiagram::unlink(2).unwrap(), CubeLimits::default()).unwrap(), q2.pow(2));
        assert_eq!(jones("PD[X(1,1,2,2)]"), q2);
    }

    #[test]
    fn trefoil_and_figure_eight() {
        let t = jones("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]");
        assert_eq!(t, LaurentPolynomial::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)]));
        assert_eq!(t.to_string(), "q + q^3 + q^5 - q^9");
        assert_eq!(reduced_eval_at_i(&t, 1), Ok(3));
        let f = jones("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]");
        assert_eq!(f, f.invert_variable());
        assert_eq!(reduced_eval_at_i(&f, 1), Ok(5));
        assert_eq!(reduced_eval_at_i(&LaurentPolynomial::quantum_two(), 1), Ok(1));
    }

    #[test]
    fn hopf_link() {
        let h = jones("PD[X(4,1,3,2),X(2,3,1,4)]");
        let reduced = h.div_quantum_two().unwrap();
        assert_eq!(reduced, LaurentPolynomial::from_terms([(1, 1), (5, 1)]));
        assert_eq!(reduced_eval_at_i(&h, 2), Ok(2));
    }

    #[test]
    fn division_and_errors() {
        let p = LaurentPolynomial::from_terms([(0, 1)]);
        assert_eq!(p.div_quantum_two(), None);
        assert_eq!(reduced_eval_at_i(&p, 1), Err(JonesError::NotDivisible));
        let q2 = LaurentPolynomial::quantum_two();
        assert!(matches!(
            reduced_eval_at_i(&q2.pow(2), 1),
            Err(JonesError::Normalization { .. })
        ));
        let x = LaurentPolynomial::from_terms([(-3, 2), (4, -7), (9, 1)]);
        assert_eq!(x.mul(&q2).div_quantum_two(), Some(x));
        assert_eq!(LaurentPolynomial::from_terms([(-2, -1), (0, 3)]).to_string(), "-q^-2 + 3");
    }
}
