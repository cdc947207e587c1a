//! Sparse multivariate polynomials with exact or modular integer coefficients.
//!
//! A polynomial is a list of terms sorted by [`Monomial`], with no zero
//! coefficients stored, so equal polynomials have identical term lists.
//! Exact coefficients are arbitrary-precision integers; they are stored as
//! `i128` whenever the l1 norm of the whole polynomial fits, which keeps the
//! hot multiplication loop free of heap allocation.

mod codec;
mod coeff;
mod mul;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use codec::{deserialize, read_file, read_header, serialize, verify_file, write_file, CacheHeader};
pub use coeff::{ModQ, MODPRIME_Q};

pub(crate) use coeff::Coeff;
use coeff::{l1_big, l1_wide, WIDE_LIMIT};
use mul::Operand;

/// Maximum number of variables a packed monomial holds.
pub const MAX_VARS: usize = 16;

/// Exponent vector packed one byte per variable into a `u128`, variable 0 in
/// the most significant byte. Integer order on the packed value is
/// lexicographic order on exponent vectors, and multiplication of monomials
/// is integer addition as long as no exponent exceeds 255.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u8]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len()));
        }
        let mut bytes = [0u8; 16];
        bytes[..exps.len()].copy_from_slice(exps);
        Ok(Monomial(u128::from_be_bytes(bytes)))
    }

    /// The monomial `x_i`.
    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS, "variable index {i} out of range");
        Monomial(1u128 << (8 * (15 - i)))
    }

    #[inline]
    pub(crate) fn from_raw(raw: u128) -> Self {
        Monomial(raw)
    }

    #[inline]
    pub(crate) fn raw(self) -> u128 {
        self.0
    }

    pub fn exponent(self, i: usize) -> u8 {
        self.0.to_be_bytes()[i]
    }

    pub fn exponents(self, n_vars: usize) -> Vec<u8> {
        self.0.to_be_bytes()[..n_vars].to_vec()
    }

    pub fn degree(self) -> u32 {
        self.0.to_be_bytes().iter().map(|&b| b as u32).sum()
    }
}

/// Product of monomials; the caller guarantees the exponents stay below 256.
impl std::ops::Mul for Monomial {
    type Output = Monomial;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)] // exponent vectors add
    fn mul(self, other: Monomial) -> Monomial {
        Monomial(self.0 + other.0)
    }
}

/// How coefficients are represented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientMode {
    /// Exact integers.
    #[default]
    Exact,
    /// Residues modulo [`MODPRIME_Q`]; term counts become Monte Carlo lower bounds.
    #[serde(rename = "modprime")]
    ModPrime,
}

impl CoefficientMode {
    /// Default mode for determinants of groups of the given order: large
    /// orders switch to modular coefficients.
    pub fn default_for_order(order: usize) -> Self {
        if order >= 14 {
            CoefficientMode::ModPrime
        } else {
            CoefficientMode::Exact
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CoefficientMode::Exact => "exact",
            CoefficientMode::ModPrime => "modprime",
        }
    }
}

impl fmt::Display for CoefficientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Upper limit on resident polynomial data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemoryBudget(u64);

impl MemoryBudget {
    pub const DEFAULT_BYTES: u64 = 8 << 30;

    pub fn new(bytes: u64) -> Self {
        MemoryBudget(bytes)
    }

    pub fn unlimited() -> Self {
        MemoryBudget(u64::MAX)
    }

    pub fn bytes(self) -> u64 {
        self.0
    }
}

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget(Self::DEFAULT_BYTES)
    }
}

/// Number of nonzero terms, with the failure probability bound when the
/// count came from modular coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TermCount {
    pub terms: u64,
    pub failure_bound: Option<f64>,
}

impl TermCount {
    pub fn exact(terms: u64) -> Self {
        TermCount {
            terms,
            failure_bound: None,
        }
    }

    /// Monte Carlo count for coefficients of l1 norm at most `2^l1_log2`,
    /// with failure bound `terms * ceil(l1_log2) / q`.
    pub fn modular(terms: u64, l1_log2: f64) -> Self {
        let bits = l1_log2.ceil().max(1.0);
        TermCount {
            terms,
            failure_bound: Some((terms as f64 * bits / MODPRIME_Q as f64).min(1.0)),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.failure_bound.is_none()
    }
}

impl fmt::Display for TermCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failure_bound {
            None => write!(f, "{}", self.terms),
            Some(p) => write!(f, "{} (Monte Carlo, failure <= {p:.3e})", self.terms),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Coeffs {
    Wide(Vec<i128>),
    Big(Vec<BigInt>),
    Mod(Vec<ModQ>),
}

impl Coeffs {
    fn get(&self, i: usize) -> BigInt {
        match self {
            Coeffs::Wide(v) => BigInt::from(v[i]),
            Coeffs::Big(v) => v[i].clone(),
            Coeffs::Mod(v) => BigInt::from(v[i].0),
        }
    }

    fn to_big(&self) -> Vec<BigInt> {
        match self {
            Coeffs::Wide(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
            Coeffs::Big(v) => v.clone(),
            Coeffs::Mod(v) => v.iter().map(|c| BigInt::from(c.0)).collect(),
        }
    }

    /// Stores exact coefficients as `i128` when their l1 norm allows it.
    fn compact(self) -> Coeffs {
        match self {
            Coeffs::Big(v) => {
                if l1_big(&v) <= BigInt::from(WIDE_LIMIT) {
                    Coeffs::Wide(v.iter().map(|c| c.to_i128().expect("bounded")).collect())
                } else {
                    Coeffs::Big(v)
                }
            }
            Coeffs::Wide(v) => {
                if l1_wide(&v).is_some_and(|l| l <= WIDE_LIMIT) {
                    Coeffs::Wide(v)
                } else {
                    Coeffs::Big(v.into_iter().map(BigInt::from).collect())
                }
            }
            other => other,
        }
    }
}

/// A sparse polynomial in `n_vars` variables.
#[derive(Clone, Debug)]
pub struct SparsePoly {
    n_vars: usize,
    monos: Vec<Monomial>,
    coeffs: Coeffs,
    /// Upper bound on log2 of the l1 norm of the exact polynomial. For
    /// modular polynomials this is the only knowledge kept about the
    /// discarded coefficient sizes.
    l1_log2: f64,
}

fn log2_big(x: &BigInt) -> f64 {
    if Zero::is_zero(x) {
        return 0.0;
    }
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("finite").log2()
    } else {
        bits as f64
    }
}

impl SparsePoly {
    fn check_vars(n_vars: usize) -> Result<()> {
        if n_vars > MAX_VARS {
            Err(Error::TooManyVariables(n_vars))
        } else {
            Ok(())
        }
    }

    fn assemble(n_vars: usize, monos: Vec<Monomial>, coeffs: Coeffs) -> Self {
        let mut p = SparsePoly {
            n_vars,
            monos,
            coeffs,
            l1_log2: 0.0,
        };
        p.l1_log2 = match &p.coeffs {
            Coeffs::Mod(_) => 0.0,
            _ => log2_big(&p.l1_norm()),
        };
        p
    }

    pub fn zero(n_vars: usize) -> Result<Self> {
        Self::check_vars(n_vars)?;
        Ok(Self::assemble(n_vars, Vec::new(), Coeffs::Wide(Vec::new())))
    }

    pub fn constant(n_vars: usize, c: i64) -> Result<Self> {
        Self::check_vars(n_vars)?;
        if c == 0 {
            return Self::zero(n_vars);
        }
        Ok(Self::assemble(
            n_vars,
            vec![Monomial::ONE],
            Coeffs::Wide(vec![c as i128]),
        ))
    }

    pub fn one(n_vars: usize) -> Result<Self> {
        Self::constant(n_vars, 1)
    }

    /// The polynomial `x_i`.
    pub fn variable(n_vars: usize, i: usize) -> Result<Self> {
        Self::check_vars(n_vars)?;
        if i >= n_vars {
            return Err(Error::InvalidArgument(format!(
                "variable x{i} outside {n_vars} variables"
            )));
        }
        Ok(Self::assemble(n_vars, vec![Monomial::var(i)], Coeffs::Wide(vec![1])))
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or
    /// zero) terms.
    pub fn from_terms<I, E>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, BigInt)>,
        E: AsRef<[u8]>,
    {
        Self::check_vars(n_vars)?;
        let mut all = Vec::new();
        for (exps, c) in terms {
            let exps = exps.as_ref();
            if exps.len() != n_vars {
                return Err(Error::VariableMismatch {
                    left: n_vars,
                    right: exps.len(),
                });
            }
            all.push((Monomial::from_exponents(exps)?, c));
        }
        all.sort_by_key(|t| t.0);
        let mut monos: Vec<Monomial> = Vec::with_capacity(all.len());
        let mut coeffs: Vec<BigInt> = Vec::with_capacity(all.len());
        for (m, c) in all {
            if monos.last() == Some(&m) {
                *coeffs.last_mut().expect("parallel") += c;
            } else {
                monos.push(m);
                coeffs.push(c);
            }
        }
        let keep: Vec<bool> = coeffs.iter().map(|c| !Zero::is_zero(c)).collect();
        let mut it = keep.iter();
        monos.retain(|_| *it.next().expect("parallel"));
        coeffs.retain(|c| !Zero::is_zero(c));
        Ok(Self::assemble(n_vars, monos, Coeffs::Big(coeffs).compact()))
    }

    pub(crate) fn from_sorted_wide(n_vars: usize, monos: Vec<Monomial>, coeffs: Vec<i128>) -> Self {
        Self::assemble(n_vars, monos, Coeffs::Wide(coeffs).compact())
    }

    pub(crate) fn from_sorted_big(n_vars: usize, monos: Vec<Monomial>, coeffs: Vec<BigInt>) -> Self {
        Self::assemble(n_vars, monos, Coeffs::Big(coeffs).compact())
    }

    pub(crate) fn from_sorted_mod(n_vars: usize, monos: Vec<Monomial>, coeffs: Vec<ModQ>, l1_log2: f64) -> Self {
        SparsePoly {
            n_vars,
            monos,
            coeffs: Coeffs::Mod(coeffs),
            l1_log2,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn mode(&self) -> CoefficientMode {
        match self.coeffs {
            Coeffs::Mod(_) => CoefficientMode::ModPrime,
            _ => CoefficientMode::Exact,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.monos.len()
    }

    /// Term count with the Monte Carlo failure bound
    /// `terms * coefficient_bits / q` for modular polynomials.
    pub fn count(&self) -> TermCount {
        let terms = self.monos.len() as u64;
        match self.coeffs {
            Coeffs::Mod(_) => TermCount::modular(terms, self.l1_log2),
            _ => TermCount::exact(terms),
        }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    /// Terms in ascending monomial order. Modular coefficients are returned
    /// as their representatives in `0..q`.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, BigInt)> + '_ {
        self.monos.iter().enumerate().map(|(i, &m)| (m, self.coeffs.get(i)))
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<BigInt> {
        self.monos.binary_search(m).ok().map(|i| self.coeffs.get(i))
    }

    pub fn max_degree(&self) -> u32 {
        self.monos.iter().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// True when every term has total degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.monos.iter().all(|m| m.degree() == d)
    }

    /// Exact l1 norm; for modular polynomials, of the stored representatives.
    pub fn l1_norm(&self) -> BigInt {
        match &self.coeffs {
            Coeffs::Wide(v) => match l1_wide(v) {
                Some(l) => BigInt::from(l),
                None => l1_big(&self.coeffs.to_big()),
            },
            Coeffs::Big(v) => l1_big(v),
            Coeffs::Mod(v) => v.iter().map(|c| BigInt::from(c.0)).sum(),
        }
    }

    /// Upper bound on log2 of the exact l1 norm.
    pub fn l1_log2_bound(&self) -> f64 {
        self.l1_log2
    }

    /// Approximate resident bytes of one term.
    pub fn term_bytes(&self) -> usize {
        16 + match &self.coeffs {
            Coeffs::Wide(_) => 16,
            Coeffs::Mod(_) => 8,
            Coeffs::Big(v) => {
                let heap: usize = v.iter().map(Coeff::heap_bytes).sum();
                32 + heap / v.len().max(1)
            }
        }
    }

    pub fn resident_bytes(&self) -> u64 {
        (self.term_bytes() * self.monos.len()) as u64
    }

    pub(crate) fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    fn same_vars(&self, other: &SparsePoly) -> Result<()> {
        if self.n_vars != other.n_vars {
            Err(Error::VariableMismatch {
                left: self.n_vars,
                right: other.n_vars,
            })
        } else {
            Ok(())
        }
    }

    /// Reduces exact coefficients modulo [`MODPRIME_Q`]. Converting a
    /// modular polynomial back to exact form is an error.
    pub fn to_mode(&self, mode: CoefficientMode) -> Result<SparsePoly> {
        match (mode, &self.coeffs) {
            (CoefficientMode::Exact, Coeffs::Mod(_)) => Err(Error::ModeMismatch),
            (CoefficientMode::Exact, _) | (CoefficientMode::ModPrime, Coeffs::Mod(_)) => Ok(self.clone()),
            (CoefficientMode::ModPrime, exact) => {
                let reduced: Vec<ModQ> = match exact {
                    Coeffs::Wide(v) => v.iter().map(|&c| ModQ::from_i128(c)).collect(),
                    Coeffs::Big(v) => v.iter().map(ModQ::from_bigint).collect(),
                    Coeffs::Mod(_) => unreachable!(),
                };
                let (monos, coeffs): (Vec<_>, Vec<_>) =
                    self.monos.iter().zip(reduced).filter(|(_, c)| !c.is_zero()).unzip();
                Ok(Self::from_sorted_mod(self.n_vars, monos, coeffs, self.l1_log2))
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.same_vars(other)?;
        let n = self.n_vars;
        let l1 = self.l1_log2.max(other.l1_log2) + 1.0;
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Mod(x), Coeffs::Mod(y)) => {
                let (m, c) = mul::add_terms(self.operand(x), other.operand(y));
                Self::from_sorted_mod(n, m, c, l1)
            }
            (Coeffs::Mod(_), _) | (_, Coeffs::Mod(_)) => return Err(Error::ModeMismatch),
            (Coeffs::Wide(x), Coeffs::Wide(y)) if matches!((l1_wide(x), l1_wide(y)), (Some(a), Some(b)) if a.checked_add(b).is_some_and(|s| s <= WIDE_LIMIT)) =>
            {
                let (m, c) = mul::add_terms(self.operand(x), other.operand(y));
                Self::from_sorted_wide(n, m, c)
            }
            _ => {
                let (x, y) = (self.coeffs.to_big(), other.coeffs.to_big());
                let (m, c) = mul::add_terms(self.operand(&x), other.operand(&y));
                Self::from_sorted_big(n, m, c)
            }
        })
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = self.clone();
        match &mut out.coeffs {
            Coeffs::Wide(v) => v.iter_mut().for_each(Coeff::negate),
            Coeffs::Big(v) => v.iter_mut().for_each(Coeff::negate),
            Coeffs::Mod(v) => v.iter_mut().for_each(Coeff::negate),
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    fn operand<'a, C>(&'a self, coeffs: &'a [C]) -> Operand<'a, C> {
        Operand {
            monos: &self.monos,
            coeffs,
        }
    }

    /// Product of two polynomials of the same coefficient mode.
    pub fn mul(&self, other: &SparsePoly, budget: MemoryBudget) -> Result<SparsePoly> {
        self.same_vars(other)?;
        let degree = self.max_degree() + other.max_degree();
        if degree > 255 {
            return Err(Error::DegreeOverflow(degree));
        }
        let n = self.n_vars;
        let l1 = self.l1_log2 + other.l1_log2;
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Mod(x), Coeffs::Mod(y)) => {
                let (m, c) = mul::mul_terms(self.operand(x), other.operand(y), n, 24, budget)?;
                Self::from_sorted_mod(n, m, c, l1)
            }
            (Coeffs::Mod(_), _) | (_, Coeffs::Mod(_)) => return Err(Error::ModeMismatch),
            (Coeffs::Wide(x), Coeffs::Wide(y)) if matches!((l1_wide(x), l1_wide(y)), (Some(a), Some(b)) if a.checked_mul(b).is_some_and(|p| p <= WIDE_LIMIT)) =>
            {
                let (m, c) = mul::mul_terms(self.operand(x), other.operand(y), n, 32, budget)?;
                Self::from_sorted_wide(n, m, c)
            }
            _ => {
                let (x, y) = (self.coeffs.to_big(), other.coeffs.to_big());
                let term_bytes = 16 + 32 + (l1 / 8.0) as usize;
                let (m, c) = mul::mul_terms(self.operand(&x), other.operand(&y), n, term_bytes, budget)?;
                Self::from_sorted_big(n, m, c)
            }
        })
    }

    /// `self^k` by repeated multiplication with `self`.
    pub fn pow(&self, k: u32, budget: MemoryBudget) -> Result<SparsePoly> {
        self.pow_sequence(k, budget, |_, _| Ok(()))
    }

    /// Computes `self^1 .. self^k` by repeated multiplication, handing each
    /// power to `visit` as soon as it is available, and returns `self^k`.
    pub fn pow_sequence<F>(&self, k: u32, budget: MemoryBudget, mut visit: F) -> Result<SparsePoly>
    where
        F: FnMut(u32, &SparsePoly) -> Result<()>,
    {
        if k == 0 {
            return Err(Error::InvalidArgument("exponent must be at least 1".into()));
        }
        let mut acc = self.clone();
        visit(1, &acc)?;
        for j in 2..=k {
            acc = acc.mul(self, budget)?;
            visit(j, &acc)?;
        }
        Ok(acc)
    }

    /// Evaluates at an integer point. Modular polynomials evaluate to the
    /// residue in `0..q`.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.n_vars {
            return Err(Error::VariableMismatch {
                left: self.n_vars,
                right: point.len(),
            });
        }
        let mut total = <BigInt as Zero>::zero();
        for (m, c) in self.terms() {
            let mut t = c;
            for (i, x) in point.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        if self.mode() == CoefficientMode::ModPrime {
            let q = BigInt::from(MODPRIME_Q);
            total = ((total % &q) + &q) % &q;
        }
        Ok(total)
    }

    /// Renames variables: `x_j` becomes `x_{perm[j]}`. `perm` must be a
    /// permutation of `0..n_vars`.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<SparsePoly> {
        let n = self.n_vars;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation of the variables".into()));
        }
        let remap = |m: Monomial| {
            let mut e = [0u8; 16];
            for j in 0..n {
                e[perm[j]] = m.exponent(j);
            }
            Monomial(u128::from_be_bytes(e))
        };
        let mut idx: Vec<usize> = (0..self.monos.len()).collect();
        let new_monos: Vec<Monomial> = self.monos.iter().map(|&m| remap(m)).collect();
        idx.sort_unstable_by_key(|&i| new_monos[i]);
        let monos: Vec<Monomial> = idx.iter().map(|&i| new_monos[i]).collect();
        let coeffs = match &self.coeffs {
            Coeffs::Wide(v) => Coeffs::Wide(idx.iter().map(|&i| v[i]).collect()),
            Coeffs::Big(v) => Coeffs::Big(idx.iter().map(|&i| v[i].clone()).collect()),
            Coeffs::Mod(v) => Coeffs::Mod(idx.iter().map(|&i| v[i]).collect()),
        };
        Ok(SparsePoly {
            n_vars: n,
            monos,
            coeffs,
            l1_log2: self.l1_log2,
        })
    }

    /// Substitutes `x_j -> images[j]` for every variable. The images live in
    /// a common ring whose variable count may differ from `self`.
    pub fn compose(&self, images: &[SparsePoly], budget: MemoryBudget) -> Result<SparsePoly> {
        if images.len() != self.n_vars {
            return Err(Error::VariableMismatch {
                left: self.n_vars,
                right: images.len(),
            });
        }
        let target_vars = images.first().map(|p| p.n_vars).unwrap_or(0);
        let mode = self.mode();
        let mut powers: Vec<Vec<SparsePoly>> = Vec::with_capacity(images.len());
        for (j, img) in images.iter().enumerate() {
            img.same_vars(&images[0])?;
            let top = self.monos.iter().map(|m| m.exponent(j)).max().unwrap_or(0);
            let mut list = vec![SparsePoly::one(target_vars)?.to_mode(mode)?];
            for e in 1..=top as usize {
                let next = list[e - 1].mul(&img.to_mode(mode)?, budget)?;
                list.push(next);
            }
            powers.push(list);
        }
        let mut total = SparsePoly::zero(target_vars)?.to_mode(mode)?;
        for (i, &m) in self.monos.iter().enumerate() {
            let mut term = SparsePoly::single_term(target_vars, Monomial::ONE, &self.coeffs, i)?;
            for (j, list) in powers.iter().enumerate() {
                let e = m.exponent(j) as usize;
                if e > 0 {
                    term = term.mul(&list[e], budget)?;
                }
            }
            total = total.add(&term)?;
        }
        Ok(total)
    }

    fn single_term(n_vars: usize, m: Monomial, coeffs: &Coeffs, i: usize) -> Result<SparsePoly> {
        Self::check_vars(n_vars)?;
        Ok(match coeffs {
            Coeffs::Wide(v) => Self::from_sorted_wide(n_vars, vec![m], vec![v[i]]),
            Coeffs::Big(v) => Self::from_sorted_big(n_vars, vec![m], vec![v[i].clone()]),
            Coeffs::Mod(v) => Self::from_sorted_mod(n_vars, vec![m], vec![v[i]], 0.0),
        })
    }

    /// `sum_i (+/-) shift_i * part_i` for parts sharing one coefficient mode.
    pub(crate) fn shifted_sum(n_vars: usize, parts: &[(Monomial, bool, &SparsePoly)]) -> Result<SparsePoly> {
        Self::check_vars(n_vars)?;
        let all_mod = parts.iter().all(|p| p.2.mode() == CoefficientMode::ModPrime);
        let any_mod = parts.iter().any(|p| p.2.mode() == CoefficientMode::ModPrime);
        if any_mod && !all_mod {
            return Err(Error::ModeMismatch);
        }
        let l1 = parts.iter().map(|p| p.2.l1_log2).fold(0.0, f64::max) + (parts.len() as f64).log2().max(0.0);
        if all_mod && !parts.is_empty() {
            let ops: Vec<_> = parts
                .iter()
                .map(|(s, neg, p)| match &p.coeffs {
                    Coeffs::Mod(v) => (*s, *neg, p.operand(v.as_slice())),
                    _ => unreachable!(),
                })
                .collect();
            let (m, c) = mul::shifted_sum(&ops);
            return Ok(Self::from_sorted_mod(n_vars, m, c, l1));
        }
        let wide_ok = parts
            .iter()
            .try_fold(0u128, |acc, p| match &p.2.coeffs {
                Coeffs::Wide(v) => l1_wide(v).and_then(|l| acc.checked_add(l)),
                _ => None,
            })
            .is_some_and(|total| total <= WIDE_LIMIT);
        if wide_ok {
            let ops: Vec<_> = parts
                .iter()
                .map(|(s, neg, p)| match &p.coeffs {
                    Coeffs::Wide(v) => (*s, *neg, p.operand(v.as_slice())),
                    _ => unreachable!(),
                })
                .collect();
            let (m, c) = mul::shifted_sum(&ops);
            Ok(Self::from_sorted_wide(n_vars, m, c))
        } else {
            let bigs: Vec<Vec<BigInt>> = parts.iter().map(|p| p.2.coeffs.to_big()).collect();
            let ops: Vec<_> = parts
                .iter()
                .zip(&bigs)
                .map(|((s, neg, p), b)| (*s, *neg, p.operand(b.as_slice())))
                .collect();
            let (m, c) = mul::shifted_sum(&ops);
            Ok(Self::from_sorted_big(n_vars, m, c))
        }
    }
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        if self.n_vars != other.n_vars || self.monos != other.monos {
            return false;
        }
        match (&self.coeffs, &other.coeffs) {
            (Coeffs::Mod(a), Coeffs::Mod(b)) => a == b,
            (Coeffs::Mod(_), _) | (_, Coeffs::Mod(_)) => false,
            (Coeffs::Wide(a), Coeffs::Wide(b)) => a == b,
            (a, b) => a.to_big() == b.to_big(),
        }
    }
}

impl Eq for SparsePoly {}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // highest monomial first, the usual way of writing polynomials
        for (k, (m, c)) in self.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = (0..self.n_vars)
                .filter(|&i| m.exponent(i) > 0)
                .map(|i| match m.exponent(i) {
                    1 => format!("x{i}"),
                    e => format!("x{i}^{e}"),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Coefficientwise sum.
pub fn poly_add(a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
    a.add(b)
}

/// Product in the requested coefficient mode.
pub fn poly_mul(a: &SparsePoly, b: &SparsePoly, mode: CoefficientMode, budget: MemoryBudget) -> Result<SparsePoly> {
    a.to_mode(mode)?.mul(&b.to_mode(mode)?, budget)
}

/// `a^k` in the requested coefficient mode, by repeated multiplication.
pub fn poly_pow(a: &SparsePoly, k: u32, mode: CoefficientMode, budget: MemoryBudget) -> Result<SparsePoly> {
    a.to_mode(mode)?.pow(k, budget)
}

pub fn term_count(a: &SparsePoly) -> TermCount {
    a.count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: usize, terms: &[(&[u8], i64)]) -> SparsePoly {
        SparsePoly::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c)))).unwrap()
    }

    #[test]
    fn monomial_packing_orders_lexicographically() {
        let a = Monomial::from_exponents(&[1, 0, 5]).unwrap();
        let b = Monomial::from_exponents(&[0, 9, 9]).unwrap();
        assert!(a > b);
        assert_eq!((a * b).exponents(3), vec![1, 9, 14]);
        assert_eq!(a.degree(), 6);
        assert_eq!(Monomial::var(2), Monomial::from_exponents(&[0, 0, 1]).unwrap());
        assert!(Monomial::from_exponents(&[0; 17]).is_err());
    }

    #[test]
    fn cancellation_leaves_zero() {
        let x = poly(1, &[(&[1], 1)]);
        let s = poly_add(&x, &x.neg()).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.term_count(), 0);
    }

    #[test]
    fn partial_cancellation() {
        let a = poly(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let b = poly(2, &[(&[0, 2], 1)]);
        let s = a.add(&b).unwrap();
        assert_eq!(s, poly(2, &[(&[2, 0], 1)]));
    }

    #[test]
    fn disjoint_support_counts_add() {
        let a = poly(2, &[(&[1, 0], 2), (&[0, 3], 1)]);
        let b = poly(2, &[(&[2, 2], 5)]);
        assert_eq!(a.add(&b).unwrap().term_count(), 3);
    }

    #[test]
    fn difference_of_squares() {
        let a = poly(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let b = poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let p = poly_mul(&a, &b, CoefficientMode::Exact, MemoryBudget::default()).unwrap();
        assert_eq!(p, poly(2, &[(&[2, 0], 1), (&[0, 2], -1)]));
        assert_eq!(p.to_string(), "x0^2 - x1^2");
        let one = SparsePoly::one(2).unwrap();
        assert_eq!(a.mul(&one, MemoryBudget::default()).unwrap(), a);
    }

    #[test]
    fn pow_of_one_is_identity() {
        let a = poly(3, &[(&[1, 0, 0], 3), (&[0, 1, 1], -2)]);
        assert_eq!(a.pow(1, MemoryBudget::default()).unwrap(), a);
        assert!(a.pow(0, MemoryBudget::default()).is_err());
    }

    #[test]
    fn evaluation() {
        let p = poly(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let v = p.evaluate(&[BigInt::from(3), BigInt::from(2)]).unwrap();
        assert_eq!(v, BigInt::from(5));
        assert!(p.evaluate(&[BigInt::from(1)]).is_err());
    }

    #[test]
    fn big_coefficients_promote() {
        // (2^100 x0 + 2^100 x1)^2 overflows i128 and must switch to bignums
        let c: BigInt = BigInt::from(1) << 100;
        let a = SparsePoly::from_terms(2, vec![(vec![1u8, 0], c.clone()), (vec![0u8, 1], c.clone())]).unwrap();
        let sq = a.mul(&a, MemoryBudget::default()).unwrap();
        let m = Monomial::from_exponents(&[1, 1]).unwrap();
        assert_eq!(sq.coefficient(&m), Some(BigInt::from(2) * &c * &c));
        assert!(matches!(sq.coeffs, Coeffs::Big(_)));
        // and demote again once the coefficients shrink
        let back = sq.sub(&sq).unwrap();
        assert!(back.is_zero());
    }

    #[test]
    fn modprime_reduces_and_flags() {
        let a = poly(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let m = a.to_mode(CoefficientMode::ModPrime).unwrap();
        let sq = poly_mul(&m, &m, CoefficientMode::ModPrime, MemoryBudget::default()).unwrap();
        let c = sq.count();
        assert_eq!(c.terms, 3);
        assert!(c.failure_bound.unwrap() > 0.0);
        assert!(matches!(m.to_mode(CoefficientMode::Exact), Err(Error::ModeMismatch)));
        assert!(matches!(a.mul(&m, MemoryBudget::default()), Err(Error::ModeMismatch)));
    }

    #[test]
    fn budget_is_enforced() {
        let a = poly(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]);
        let err = a.pow(6, MemoryBudget::new(64)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 64, .. }), "{err}");
    }

    #[test]
    fn degree_overflow_is_rejected() {
        let x = poly(1, &[(&[200], 1)]);
        assert!(matches!(
            x.mul(&x, MemoryBudget::default()),
            Err(Error::DegreeOverflow(400))
        ));
    }

    #[test]
    fn mismatched_variables() {
        let a = SparsePoly::one(2).unwrap();
        let b = SparsePoly::one(3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch { .. })));
        assert!(matches!(
            a.mul(&b, MemoryBudget::default()),
            Err(Error::VariableMismatch { .. })
        ));
    }

    #[test]
    fn composition_substitutes_variables() {
        // (y0 - y1) with y0 = x0 + x2, y1 = x1 + x3
        let f = poly(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let y0 = poly(4, &[(&[1, 0, 0, 0], 1), (&[0, 0, 1, 0], 1)]);
        let y1 = poly(4, &[(&[0, 1, 0, 0], 1), (&[0, 0, 0, 1], 1)]);
        let g = f.compose(&[y0, y1], MemoryBudget::default()).unwrap();
        assert_eq!(
            g,
            poly(
                4,
                &[
                    (&[1, 0, 0, 0], 1),
                    (&[0, 0, 1, 0], 1),
                    (&[0, 1, 0, 0], -1),
                    (&[0, 0, 0, 1], -1)
                ]
            )
        );
    }

    #[test]
    fn permutation_of_variables() {
        let p = poly(3, &[(&[2, 1, 0], 4), (&[0, 0, 3], -1)]);
        let q = p.permute_variables(&[1, 2, 0]).unwrap();
        assert_eq!(q, poly(3, &[(&[0, 2, 1], 4), (&[3, 0, 0], -1)]));
        assert!(p.permute_variables(&[0, 0, 1]).is_err());
    }
}
