//! The quotient by `C_2 = V_{(-2)}V`: commutative polynomials in the
//! images of the Heisenberg generators and a Laurent variable `Ē` for the
//! lattice sectors `e^{mY}`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{Basis, FockState, WeightVector};
use crate::scalar::ScalarQ;

/// `Ē^{e_power} Π_s s̄^{exps[s]}`, `s` running over basis indices. A negative
/// `e_power` marks the `F̄` sectors `e^{-|m|Y}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct C2Mono {
    pub e_power: i64,
    pub exps: Vec<u32>,
}

impl C2Mono {
    fn one(n: usize) -> Self {
        C2Mono {
            e_power: 0,
            exps: vec![0; n + 1],
        }
    }

    fn mul(&self, other: &Self) -> Self {
        C2Mono {
            e_power: self.e_power + other.e_power,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct C2Poly {
    n: usize,
    terms: BTreeMap<C2Mono, ScalarQ>,
}

/// Equality of terms; the zero polynomial compares equal across ranks.
impl PartialEq for C2Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for C2Poly {}

impl C2Poly {
    pub fn zero(n: usize) -> Self {
        C2Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: ScalarQ) -> Self {
        let mut p = Self::zero(n);
        p.add_term(C2Mono::one(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, ScalarQ::one())
    }

    /// `s̄` for a basis symbol; `Ȳ` is zero.
    pub fn var(n: usize, b: Basis) -> Self {
        if b == Basis::Y {
            return Self::zero(n);
        }
        let mut m = C2Mono::one(n);
        m.exps[b.index(n)] = 1;
        let mut p = Self::zero(n);
        p.add_term(m, ScalarQ::one());
        p
    }

    /// `Ē^m`.
    pub fn e_bar(n: usize, m: i64) -> Self {
        let mut mono = C2Mono::one(n);
        mono.e_power = m;
        let mut p = Self::zero(n);
        p.add_term(mono, ScalarQ::one());
        p
    }

    /// Image of `a_{(-1)}|0>`: the linear form with the `Y` part dropped.
    pub fn linear(a: &WeightVector) -> Self {
        let n = a.rank();
        let mut p = Self::zero(n);
        for (i, c) in a.support() {
            let b = Basis::from_index(i, n);
            if b != Basis::Y {
                p = p.add(&Self::var(n, b).scale(c));
            }
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&C2Mono, &ScalarQ)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: C2Mono, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.n = self.n.max(other.n);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-ScalarQ::one()))
    }

    pub fn scale(&self, c: &ScalarQ) -> Self {
        let mut out = Self::zero(self.n);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n.max(other.n));
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    /// True if some term involves `b̄`.
    pub fn involves(&self, b: Basis) -> bool {
        if self.is_zero() {
            return false;
        }
        let idx = b.index(self.n);
        self.terms.keys().any(|m| m.exps[idx] > 0)
    }

    /// `∂/∂s̄`.
    pub fn derivative(&self, b: Basis) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let idx = b.index(self.n);
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.exps[idx];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.exps[idx] -= 1;
            out.add_term(d, c * &ScalarQ::from_int(e as i64));
        }
        out
    }

    /// Value at a point; `point` maps basis index to a rational. Fails if a
    /// coefficient depends on `K` or `Ē` occurs.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            if m.e_power != 0 {
                return Err(Error::Unsupported(
                    "evaluation with a lattice factor".into(),
                ));
            }
            let mut v = c.as_rational().ok_or_else(|| {
                Error::Unsupported("evaluation of a K-dependent coefficient".into())
            })?;
            for (i, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Commutative elementary symmetric polynomial `e_m(p_1, …, p_r)`.
    pub fn esym(n: usize, m: usize, ps: &[C2Poly]) -> Self {
        let mut row = vec![Self::zero(n); m + 1];
        row[0] = Self::one(n);
        for p in ps {
            for d in (1..=m).rev() {
                row[d] = row[d].add(&row[d - 1].mul(p));
            }
        }
        row.swap_remove(m)
    }
}

impl fmt::Display for C2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = format!("({c})");
                if m.e_power != 0 {
                    s.push_str(&format!("*Ebar^{}", m.e_power));
                }
                for (i, &e) in m.exps.iter().enumerate() {
                    if e > 0 {
                        s.push_str(&format!("*{}bar^{e}", Basis::from_index(i, self.n).name()));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Image of a state in the `C_2` quotient. Monomials with a mode of depth at
/// least two vanish, `Y_{(-1)} ↦ 0`, `a_{(-1)} ↦ ā`, and `e^{mY} ↦ Ē^m`.
/// Charges outside `Z·Y` are unsupported.
pub fn c2_reduce(v: &FockState) -> Result<C2Poly> {
    let Some((first, _)) = v.terms().next() else {
        return Ok(C2Poly::zero(0));
    };
    let n = first.charge.rank();
    let y_idx = Basis::Y.index(n);
    let mut out = C2Poly::zero(n);
    for (m, c) in v.terms() {
        let mut e_power = 0i64;
        for (i, w) in m.charge.coords().iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if i != y_idx || !w.is_integer() {
                return Err(Error::Unsupported(format!(
                    "C2 image of charge {}",
                    m.charge
                )));
            }
            e_power = w.to_integer();
        }
        if m.modes
            .iter()
            .any(|md| md.depth >= 2 || md.sym as usize == y_idx)
        {
            continue;
        }
        let mut mono = C2Mono::one(n);
        mono.e_power = e_power;
        for md in &m.modes {
            mono.exps[md.sym as usize] += 1;
        }
        out.add_term(mono, c.clone());
    }
    Ok(out)
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn matrix_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &p;
            for c in col..ncols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Engine;
    use crate::fock::{Charge, KMode};

    #[test]
    fn y_and_deep_modes_vanish() {
        let e = Engine::new(3, KMode::Symbolic).unwrap();
        let y = FockState::from_weight(&e.basis_vector(Basis::Y));
        assert!(c2_reduce(&y).unwrap().is_zero());
        let q2 = e.apply_heisenberg_mode(&e.basis_vector(Basis::Q), -2, &e.vacuum());
        assert!(c2_reduce(&q2).unwrap().is_zero());
    }

    #[test]
    fn lattice_sectors_map_to_powers_of_e_bar() {
        let n = 2;
        let v = FockState::highest_weight(Charge::basis_multiple(n, Basis::Y, -1));
        assert_eq!(c2_reduce(&v).unwrap(), C2Poly::e_bar(n, -1));
        let bad = FockState::highest_weight(Charge::basis(n, Basis::Q));
        assert!(c2_reduce(&bad).is_err());
    }

    #[test]
    fn esym_of_linear_forms() {
        let n = 2;
        let a = C2Poly::var(n, Basis::A(1));
        let q = C2Poly::var(n, Basis::Q);
        let e2 = C2Poly::esym(n, 2, &[a.clone(), q.clone()]);
        assert_eq!(e2, a.mul(&q));
        assert_eq!(C2Poly::esym(n, 1, &[a.clone(), q.clone()]), a.add(&q));
    }

    #[test]
    fn rank_of_small_matrices() {
        let r = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(matrix_rank(vec![vec![r(1), r(2)], vec![r(2), r(4)]]), 1);
        assert_eq!(matrix_rank(vec![vec![r(0), r(1)], vec![r(1), r(0)]]), 2);
    }
}
