//! Phased Pauli strings and exact sums of them.
//!
//! A [`PauliTerm`] is `phase * coeff * P` where `phase` is one of the four
//! units `{+1, -1, +i, -i}`, `coeff` is a real number and `P` is a sparse
//! tensor product of single-qubit `X`, `Y`, `Z` letters. Qubits missing from
//! the letter map carry the identity. The algebra layer knows nothing about
//! fermionic sites or registers: qubit indices are plain global integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A single non-identity Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    /// Product of two letters on the same qubit, as `(phase, letter)` with
    /// `None` standing for the identity.
    pub fn product(self, other: Letter) -> (Phase, Option<Letter>) {
        use Letter::*;
        match (self, other) {
            (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, None),
            (X, Y) => (Phase::I, Some(Z)),
            (Y, X) => (Phase::MINUS_I, Some(Z)),
            (Y, Z) => (Phase::I, Some(X)),
            (Z, Y) => (Phase::MINUS_I, Some(X)),
            (Z, X) => (Phase::I, Some(Y)),
            (X, Z) => (Phase::MINUS_I, Some(Y)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        match c {
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// A power of `i`, stored as the exponent modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn neg(self) -> Phase {
        Phase((self.0 + 2) % 4)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    fn symbol(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// `phase * coeff * P` for a sparse Pauli string `P`.
///
/// The coefficient is kept non-negative; its sign lives in the phase, so
/// structural equality coincides with operator equality.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    phase: Phase,
    coeff: f64,
    letters: BTreeMap<usize, Letter>,
}

impl PauliTerm {
    pub fn identity() -> Self {
        PauliTerm {
            phase: Phase::ONE,
            coeff: 1.0,
            letters: BTreeMap::new(),
        }
    }

    pub fn single(qubit: usize, letter: Letter) -> Self {
        PauliTerm::from_letters([(qubit, letter)])
    }

    /// Builds a unit-coefficient term. Repeated qubits are multiplied in
    /// iteration order, so `[(0, X), (0, Y)]` gives `+i Z0`.
    pub fn from_letters<I>(letters: I) -> Self
    where
        I: IntoIterator<Item = (usize, Letter)>,
    {
        letters
            .into_iter()
            .fold(PauliTerm::identity(), |acc, (q, l)| {
                &acc * &PauliTerm::raw(Phase::ONE, 1.0, BTreeMap::from([(q, l)]))
            })
    }

    /// Z on every listed qubit.
    pub fn z_string<I: IntoIterator<Item = usize>>(qubits: I) -> Self {
        PauliTerm::from_letters(qubits.into_iter().map(|q| (q, Letter::Z)))
    }

    /// Canonical constructor: a negative coefficient is folded into the phase.
    fn raw(phase: Phase, coeff: f64, letters: BTreeMap<usize, Letter>) -> Self {
        let (phase, coeff) = if coeff < 0.0 {
            (phase.neg(), -coeff)
        } else {
            (phase, coeff.abs())
        };
        PauliTerm {
            phase,
            coeff,
            letters,
        }
    }

    pub fn with_phase(self, phase: Phase) -> Self {
        PauliTerm::raw(phase, self.coeff, self.letters)
    }

    pub fn with_coeff(self, coeff: f64) -> Self {
        PauliTerm::raw(self.phase, coeff, self.letters)
    }

    pub fn scaled(self, factor: f64) -> Self {
        PauliTerm::raw(self.phase, self.coeff * factor, self.letters)
    }

    pub fn times_phase(mut self, phase: Phase) -> Self {
        self.phase = self.phase * phase;
        self
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn letters(&self) -> &BTreeMap<usize, Letter> {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Option<Letter> {
        self.letters.get(&qubit).copied()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Hermitian iff the phase is real; the coefficient is always real.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.keys().copied()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.letters.keys().next_back().copied()
    }

    /// `phase * coeff` as a complex number.
    pub fn complex_coeff(&self) -> Complex64 {
        self.phase.to_complex() * self.coeff
    }

    pub fn adjoint(&self) -> Self {
        PauliTerm::raw(self.phase.conj(), self.coeff, self.letters.clone())
    }

    /// The same string with unit coefficient and phase.
    pub fn unit_string(&self) -> Self {
        PauliTerm::raw(Phase::ONE, 1.0, self.letters.clone())
    }

    /// True iff the two strings commute, i.e. they anticommute on an even
    /// number of shared qubits.
    pub fn commutes(&self, other: &PauliTerm) -> bool {
        let (small, large) = if self.letters.len() <= other.letters.len() {
            (&self.letters, &other.letters)
        } else {
            (&other.letters, &self.letters)
        };
        let anticommuting = small
            .iter()
            .filter(|(q, a)| matches!(large.get(q), Some(b) if b != *a))
            .count();
        anticommuting % 2 == 0
    }

    /// Bit masks `(x, z)` with `Y` setting both, valid when every qubit < 64.
    pub fn masks(&self) -> Option<(u64, u64)> {
        let mut x = 0u64;
        let mut z = 0u64;
        for (&q, &l) in &self.letters {
            if q >= 64 {
                return None;
            }
            match l {
                Letter::X => x |= 1 << q,
                Letter::Y => {
                    x |= 1 << q;
                    z |= 1 << q
                }
                Letter::Z => z |= 1 << q,
            }
        }
        Some((x, z))
    }
}

impl Mul for &PauliTerm {
    type Output = PauliTerm;

    fn mul(self, rhs: &PauliTerm) -> PauliTerm {
        let mut phase = self.phase * rhs.phase;
        let mut letters = self.letters.clone();
        for (&q, &b) in &rhs.letters {
            match letters.get(&q).copied() {
                None => {
                    letters.insert(q, b);
                }
                Some(a) => {
                    let (p, l) = a.product(b);
                    phase = phase * p;
                    match l {
                        Some(l) => {
                            letters.insert(q, l);
                        }
                        None => {
                            letters.remove(&q);
                        }
                    }
                }
            }
        }
        PauliTerm::raw(phase, self.coeff * rhs.coeff, letters)
    }
}

impl Mul for PauliTerm {
    type Output = PauliTerm;
    fn mul(self, rhs: PauliTerm) -> PauliTerm {
        &self * &rhs
    }
}

/// Canonical product `a * b`.
pub fn pauli_mul(a: &PauliTerm, b: &PauliTerm) -> PauliTerm {
    a * b
}

pub fn commutes(a: &PauliTerm, b: &PauliTerm) -> bool {
    a.commutes(b)
}

pub fn weight(a: &PauliTerm) -> usize {
    a.weight()
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, |c| format!("{c}"))
    }
}

impl PauliTerm {
    /// Text form with a caller-chosen coefficient formatter.
    pub fn render_with(&self, fmt_coeff: impl Fn(f64) -> String) -> String {
        struct Adapter<'a, F>(&'a PauliTerm, F);
        impl<F: Fn(f64) -> String> fmt::Display for Adapter<'_, F> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.render(f, &self.1)
            }
        }
        Adapter(self, fmt_coeff).to_string()
    }

    fn render(&self, f: &mut fmt::Formatter<'_>, fmt_coeff: impl Fn(f64) -> String) -> fmt::Result {
        write!(f, "{}{}", self.phase.symbol(), fmt_coeff(self.coeff))?;
        for (q, l) in &self.letters {
            write!(f, " {}{}", l.as_char(), q)?;
        }
        Ok(())
    }
}

impl FromStr for PauliTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |message: String| Error::Parse { line: 1, message };
        let mut tokens = s.split_whitespace();
        let head = tokens
            .next()
            .ok_or_else(|| err("empty Pauli term".to_string()))?;
        let (sign, rest) = match head.as_bytes().first() {
            Some(b'+') => (Phase::ONE, &head[1..]),
            Some(b'-') => (Phase::MINUS_ONE, &head[1..]),
            _ => return Err(err(format!("term must start with + or -: {head:?}"))),
        };
        let (phase, number) = match rest.strip_prefix('i') {
            Some(n) => (sign * Phase::I, n),
            None => (sign, rest),
        };
        if number.starts_with(['+', '-']) {
            return Err(err(format!("malformed coefficient {head:?}")));
        }
        let coeff: f64 = number
            .parse()
            .map_err(|_| err(format!("malformed coefficient {head:?}")))?;
        if !coeff.is_finite() {
            return Err(err(format!("non-finite coefficient {head:?}")));
        }
        let mut letters = BTreeMap::new();
        for tok in tokens {
            let mut chars = tok.chars();
            let letter = chars
                .next()
                .and_then(Letter::from_char)
                .ok_or_else(|| err(format!("bad letter in {tok:?}")))?;
            let qubit: usize = chars
                .as_str()
                .parse()
                .map_err(|_| err(format!("bad qubit index in {tok:?}")))?;
            if letters.insert(qubit, letter).is_some() {
                return Err(err(format!("qubit {qubit} appears twice")));
            }
        }
        Ok(PauliTerm::raw(phase, coeff, letters))
    }
}

/// A sum of Pauli terms, merged exactly on construction.
///
/// Two terms merge when they have the same letters and the same
/// real/imaginary phase class. Exactly-zero results are dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    terms: Vec<PauliTerm>,
}

type SumKey = (Vec<(usize, Letter)>, bool);

impl PauliSum {
    pub fn zero() -> Self {
        PauliSum::default()
    }

    pub fn from_terms<I: IntoIterator<Item = PauliTerm>>(terms: I) -> Self {
        let mut merged: BTreeMap<SumKey, f64> = BTreeMap::new();
        for t in terms {
            let imag = !t.phase.is_real();
            let sign = if t.phase == Phase::MINUS_ONE || t.phase == Phase::MINUS_I {
                -1.0
            } else {
                1.0
            };
            let key = (t.letters.iter().map(|(&q, &l)| (q, l)).collect(), imag);
            *merged.entry(key).or_insert(0.0) += sign * t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|((letters, imag), c)| {
                let phase = if imag { Phase::I } else { Phase::ONE };
                PauliTerm::raw(phase, c, letters.into_iter().collect())
            })
            .collect();
        PauliSum { terms }
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<PauliTerm> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PauliSum::from_terms(self.terms.iter().map(|t| t.clone().scaled(factor)))
    }

    pub fn times_phase(&self, phase: Phase) -> Self {
        PauliSum::from_terms(self.terms.iter().map(|t| t.clone().times_phase(phase)))
    }

    pub fn add(&self, other: &PauliSum) -> Self {
        PauliSum::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn mul_term(&self, rhs: &PauliTerm) -> Self {
        PauliSum::from_terms(self.terms.iter().map(|t| t * rhs))
    }

    pub fn term_mul(lhs: &PauliTerm, rhs: &PauliSum) -> Self {
        PauliSum::from_terms(rhs.terms.iter().map(|t| lhs * t))
    }

    pub fn mul(&self, rhs: &PauliSum) -> Self {
        PauliSum::from_terms(
            self.terms
                .iter()
                .flat_map(|a| rhs.terms.iter().map(move |b| a * b)),
        )
    }

    pub fn adjoint(&self) -> Self {
        PauliSum::from_terms(self.terms.iter().map(PauliTerm::adjoint))
    }

    /// Symbolic check: the canonical sum equals its adjoint.
    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(PauliTerm::is_hermitian)
    }

    pub fn max_weight(&self) -> usize {
        self.terms.iter().map(PauliTerm::weight).max().unwrap_or(0)
    }

    /// Sorted union of the term supports.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.terms.iter().flat_map(|t| t.support()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.iter().filter_map(PauliTerm::max_qubit).max()
    }

    /// True iff every pair of terms commutes.
    pub fn is_commuting(&self) -> bool {
        self.terms
            .iter()
            .enumerate()
            .all(|(i, a)| self.terms[i + 1..].iter().all(|b| a.commutes(b)))
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &PauliSum) -> Self {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                if !a.commutes(b) {
                    // ab - ba = 2ab when the strings anticommute
                    out.push((a * b).scaled(2.0));
                }
            }
        }
        PauliSum::from_terms(out)
    }

    /// Sum of absolute coefficients, an upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }
}

impl From<PauliTerm> for PauliSum {
    fn from(t: PauliTerm) -> Self {
        PauliSum::from_terms([t])
    }
}

impl FromIterator<PauliTerm> for PauliSum {
    fn from_iter<I: IntoIterator<Item = PauliTerm>>(iter: I) -> Self {
        PauliSum::from_terms(iter)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
