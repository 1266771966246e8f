//! Exact Pauli-string and Pauli-sum algebra with phase tracking.
//!
//! Strings are stored in the symplectic encoding: one X-bit and one Z-bit per
//! qubit plus a global phase exponent `k` with phase `i^k`. The letter at a
//! slot is `I = (0,0)`, `X = (1,0)`, `Z = (0,1)`, `Y = (1,1)`, where the bit
//! pattern stands for the operator `i^(x·z) X^x Z^z` so that `(1,1)` is
//! exactly `Y`. All group products are computed without floating point, so
//! phases stay exact along Clifford paths.
//!
//! Qubit indices are 1-based in the public API; qubit `a` occupies bit
//! `a - 1` of the masks. Text rendering puts qubit 1 leftmost, e.g. `-i.ZXI`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Default cap on register size for dense-matrix export.
pub const DEFAULT_DENSE_CAP: usize = 10;

/// Coefficients with magnitude below this are dropped after sum arithmetic.
pub const PRUNE_EPS: f64 = 1e-12;

const MAX_QUBITS: usize = 64;

/// A single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// Dense 2x2 matrix of the letter.
    pub fn matrix(self) -> CMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => CMatrix::from_rows(2, &[l, o, o, l]),
            Pauli::X => CMatrix::from_rows(2, &[o, l, l, o]),
            Pauli::Y => CMatrix::from_rows(2, &[o, -i, i, o]),
            Pauli::Z => CMatrix::from_rows(2, &[l, o, o, -l]),
        }
    }
}

/// A power of `i`: the phase group {+1, +i, -1, -i}.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn as_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Prefix used by the text grammar: `+`, `-`, `+i`, `-i`.
    pub fn prefix(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }

    pub fn from_prefix(s: &str) -> Option<Phase> {
        match s {
            "+" => Some(Phase::ONE),
            "+i" => Some(Phase::I),
            "-" => Some(Phase::MINUS_ONE),
            "-i" => Some(Phase::MINUS_I),
            _ => None,
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase((self.0 + 2) % 4)
    }
}

/// A phase times a tensor product of Pauli letters over a fixed-size register.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

impl PauliString {
    /// The identity string on `n` qubits.
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "register size above {MAX_QUBITS}");
        PauliString { n, x: 0, z: 0, phase: Phase::ONE }
    }

    /// A single letter at 1-based qubit `a` of an `n`-qubit register.
    pub fn single(letter: Pauli, a: usize, n: usize) -> Self {
        assert!(a >= 1 && a <= n, "qubit index {a} outside 1..={n}");
        let mut s = PauliString::identity(n);
        s.set_letter(a, letter);
        s
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut s = PauliString::identity(letters.len());
        for (k, &p) in letters.iter().enumerate() {
            s.set_letter(k + 1, p);
        }
        s
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = self.phase * phase;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, a: usize) -> Pauli {
        assert!(a >= 1 && a <= self.n);
        let m = 1u64 << (a - 1);
        Pauli::from_bits(self.x & m != 0, self.z & m != 0)
    }

    pub fn set_letter(&mut self, a: usize, letter: Pauli) {
        assert!(a >= 1 && a <= self.n);
        let m = 1u64 << (a - 1);
        let (xb, zb) = letter.bits();
        if xb { self.x |= m } else { self.x &= !m }
        if zb { self.z |= m } else { self.z &= !m }
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (1..=self.n).map(|a| self.letter(a)).collect()
    }

    pub fn is_identity_letters(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// 1-based indices of qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.n).filter(|&a| self.letter(a) != Pauli::I).collect()
    }

    /// Group product with exact phase accumulation.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { left: self.n, right: other.n });
        }
        let x3 = self.x ^ other.x;
        let z3 = self.z ^ other.z;
        // sigma(x1,z1)·sigma(x2,z2) = i^(y1 + y2 - y3 + 2·(z1&x2)) sigma(x3,z3)
        let k = (self.x & self.z).count_ones() as i64
            + (other.x & other.z).count_ones() as i64
            - (x3 & z3).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64;
        let phase = self.phase * other.phase * Phase::from_exponent(k);
        Ok(PauliString { n: self.n, x: x3, z: z3, phase })
    }

    /// Register concatenation: letters appended, phases multiplied.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        let n = self.n + other.n;
        assert!(n <= MAX_QUBITS, "register size above {MAX_QUBITS}");
        PauliString {
            n,
            x: self.x | (other.x << self.n),
            z: self.z | (other.z << self.n),
            phase: self.phase * other.phase,
        }
    }

    /// True when the two strings commute as operators.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        anti.is_multiple_of(2)
    }

    /// Expectation in the universal Heisenberg state |0...0>: the phase when
    /// every letter is I or Z, zero otherwise.
    pub fn expectation_zero(&self) -> Complex64 {
        if self.x == 0 {
            self.phase.as_complex()
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Hermitian exactly when the phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase == Phase::ONE || self.phase == Phase::MINUS_ONE
    }

    /// Replace every letter at a slot outside the mask by I, phase untouched.
    pub fn restrict_to(&self, keep_mask: u64) -> PauliString {
        PauliString { n: self.n, x: self.x & keep_mask, z: self.z & keep_mask, phase: self.phase }
    }

    /// Dense matrix of the string, qubit 1 as the most significant bit.
    pub fn to_dense(&self, cap: usize) -> Result<CMatrix> {
        if self.n > cap {
            return Err(Error::DenseCapExceeded { requested: self.n, cap });
        }
        let mut m = CMatrix::identity(1).scale(self.phase.as_complex());
        for a in 1..=self.n {
            m = m.kron(&self.letter(a).matrix());
        }
        Ok(m)
    }

    /// Render in the fixture grammar, e.g. `-i.ZXI`.
    pub fn render(&self) -> String {
        let mut s = String::from(self.phase.prefix());
        s.push('.');
        for a in 1..=self.n {
            s.push(self.letter(a).to_char());
        }
        s
    }

    /// Parse the fixture grammar. The register size is the letter count.
    pub fn parse(text: &str) -> Result<PauliString> {
        let (prefix, letters) = text
            .split_once('.')
            .ok_or_else(|| Error::Parse(format!("missing '.' in pauli string `{text}`")))?;
        let phase = Phase::from_prefix(prefix)
            .ok_or_else(|| Error::Parse(format!("bad phase prefix `{prefix}` in `{text}`")))?;
        if letters.is_empty() {
            return Err(Error::Parse(format!("empty letter list in `{text}`")));
        }
        let mut s = PauliString::identity(letters.chars().count());
        for (k, c) in letters.chars().enumerate() {
            let p = Pauli::from_char(c)
                .ok_or_else(|| Error::Parse(format!("bad pauli letter `{c}` in `{text}`")))?;
            s.set_letter(k + 1, p);
        }
        Ok(s.with_phase(phase))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A complex-weighted sum of Pauli strings; phases folded into coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        PauliSum::from_string(&PauliString::identity(n))
    }

    pub fn from_string(s: &PauliString) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((s.x, s.z), s.phase.as_complex());
        PauliSum { n: s.n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms as (letter-sequence string with +1 phase, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms
            .iter()
            .map(|(&(x, z), &c)| (PauliString { n: self.n, x, z, phase: Phase::ONE }, c))
    }

    pub fn add_term(&mut self, s: &PauliString, coeff: Complex64) {
        assert_eq!(s.n, self.n, "term size mismatch");
        let c = coeff * s.phase.as_complex();
        let entry = self.terms.entry((s.x, s.z)).or_insert_with(|| Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < PRUNE_EPS {
            self.terms.remove(&(s.x, s.z));
        }
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { left: self.n, right: other.n });
        }
        let mut out = self.clone();
        for (s, c) in other.terms() {
            out.add_term(&s, c);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (s, c) in self.terms() {
            out.add_term(&s, c * factor);
        }
        out
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { left: self.n, right: other.n });
        }
        let mut out = PauliSum::zero(self.n);
        for (sa, ca) in self.terms() {
            for (sb, cb) in other.terms() {
                let prod = sa.multiply(&sb)?;
                out.add_term(&prod, ca * cb);
            }
        }
        Ok(out)
    }

    /// Expectation in the universal Heisenberg state |0...0>.
    pub fn expectation_zero(&self) -> Complex64 {
        self.terms.iter().filter(|(&(x, _), _)| x == 0).map(|(_, &c)| c).sum()
    }

    /// All coefficients real within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// Replace letters outside the 1-based `keep` set by I, merging any
    /// terms that collide.
    pub fn restrict_to(&self, keep: &[usize]) -> PauliSum {
        let mask = qubit_mask(keep, self.n);
        let mut out = PauliSum::zero(self.n);
        for (s, c) in self.terms() {
            out.add_term(&s.restrict_to(mask), c);
        }
        out
    }

    /// True when every term is supported inside `keep`.
    pub fn supported_within(&self, keep: &[usize]) -> bool {
        let mask = qubit_mask(keep, self.n);
        self.terms.keys().all(|&(x, z)| x & !mask == 0 && z & !mask == 0)
    }

    /// If the sum is a single string with a unit coefficient, return it
    /// with the coefficient folded back into an exact phase.
    pub fn as_single_string(&self) -> Option<PauliString> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(x, z), &c) = self.terms.iter().next().unwrap();
        for k in 0..4u8 {
            let phase = Phase::from_exponent(k as i64);
            if (c - phase.as_complex()).norm() < PRUNE_EPS {
                return Some(PauliString { n: self.n, x, z, phase });
            }
        }
        None
    }

    pub fn to_dense(&self, cap: usize) -> Result<CMatrix> {
        if self.n > cap {
            return Err(Error::DenseCapExceeded { requested: self.n, cap });
        }
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim);
        for (s, c) in self.terms() {
            m = m.add(&s.to_dense(cap)?.scale(c));
        }
        Ok(m)
    }

    /// Largest coefficient difference against another sum over the union of
    /// their term keys.
    pub fn max_abs_diff(&self, other: &PauliSum) -> f64 {
        assert_eq!(self.n, other.n);
        let mut worst = 0.0f64;
        for (key, c) in &self.terms {
            let d = other.terms.get(key).copied().unwrap_or_default();
            worst = worst.max((c - d).norm());
        }
        for (key, d) in &other.terms {
            if !self.terms.contains_key(key) {
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Render a component: single unit-coefficient strings use the fixture
    /// grammar; anything else is a sorted sum of `(re,im)*LETTERS` factors.
    pub fn render(&self) -> String {
        if let Some(s) = self.as_single_string() {
            return s.render();
        }
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(s, c)| {
                let letters: String = (1..=self.n).map(|a| s.letter(a).to_char()).collect();
                format!("({:+.6}{:+.6}i)*{}", c.re, c.im, letters)
            })
            .collect();
        parts.join(" ")
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Bit mask for a 1-based qubit index set.
pub fn qubit_mask(qubits: &[usize], n: usize) -> u64 {
    let mut mask = 0u64;
    for &a in qubits {
        assert!(a >= 1 && a <= n, "qubit index {a} outside 1..={n}");
        mask |= 1 << (a - 1);
    }
    mask
}
