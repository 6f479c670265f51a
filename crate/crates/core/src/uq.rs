//! Symbolic words in the quantized enveloping algebra of `gl_n`: the Hopf
//! structure, its involutions, the recursive root-vector and tensor-operator
//! constructions, and evaluation in representations.
//!
//! Elements are free linear combinations of words in Chevalley-type letters;
//! no relation rewriting is applied. Equality questions are settled by
//! evaluating in a separating family of representations with an explicit
//! rank certificate (see [`expand_in_span`]).
//!
//! Letters:
//! * [`Letter::Raise`]`(i)`, [`Letter::Lower`]`(i)` — the generators
//!   `x_i^+`, `x_i^-` for `1 <= i <= n-1`;
//! * [`Letter::Cartan`]`(i)` — `h_i` for `i <= n-1`, plus the adjoined
//!   central `h_n` (the sum of all diagonal units, represented by the
//!   identity matrix in the vector representation);
//! * [`Letter::Group`]`(mu)` — the group-like `q^(sum_a mu_a E_aa)`; `mu`
//!   is stored in half-units, so `mu[a]` is twice the exponent of `E_aa`.
//!
//! Adjacent group-like letters multiply by adding exponents and the trivial
//! group-like is dropped. This is exact in the group algebra generated by
//! the commuting diagonal exponents and is the only simplification words
//! undergo.
//!
//! One convention deserves a note: q-conjugation acts as the identity on
//! the generators `x_i^±` and `h_i`, but it sends a group-like
//! `q^(sum mu_a E_aa)` to `q^(-sum mu_a E_aa)`, because the group-like is an
//! exponential series in `t = log q` with Cartan coefficients and
//! q-conjugation flips the sign of `t`. Both tilded maps below inherit this.

use std::collections::BTreeMap;

use crate::linalg::{self, LinalgError, Matrix};
use crate::scalar::Scalar;
use thiserror::Error;

/// Default cap on expanded Sweedler terms for the symbolic adjoint action.
pub const DEFAULT_TERM_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UqError {
    #[error("index {index} out of range for n = {n}")]
    IndexRange { index: usize, n: usize },
    #[error("term cap exceeded: would expand to about {estimate} terms (cap {cap})")]
    TermCap { estimate: u128, cap: u128 },
    #[error("representation relation check failed: {0}")]
    RelationCheck(String),
    #[error("separating family is rank-deficient: rank {rank} < {needed} basis elements")]
    SeparatingFamily { rank: usize, needed: usize },
    #[error("element lies outside the spanned module (residual row {row})")]
    SpanViolation { row: usize },
}

/// Exponent vector of a group-like letter, in half-units per diagonal unit.
pub type HalfWeights = Vec<i32>;

/// A single noncommuting letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Raise(usize),
    Lower(usize),
    Cartan(usize),
    Group(HalfWeights),
}

pub type Word = Vec<Letter>;

/// Half-weight vector for `q^(h_i/2)`.
fn cartan_half(n: usize, i: usize) -> HalfWeights {
    let mut mu = vec![0i32; n];
    mu[i - 1] = 1;
    mu[i] = -1;
    mu
}

fn merge_push(out: &mut Word, letter: Letter) {
    if let Letter::Group(mu) = &letter {
        if mu.iter().all(|&x| x == 0) {
            return;
        }
        if let Some(Letter::Group(last)) = out.last_mut() {
            for (a, b) in last.iter_mut().zip(mu) {
                *a += b;
            }
            if last.iter().all(|&x| x == 0) {
                out.pop();
            }
            return;
        }
    }
    out.push(letter);
}

fn normalize_word(word: Word) -> Word {
    let mut out = Word::with_capacity(word.len());
    for l in word {
        merge_push(&mut out, l);
    }
    out
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// Finite linear combination of words; the free-algebra element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    n: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        AlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_word(n, Vec::new(), Scalar::one())
    }

    pub fn from_letter(n: usize, letter: Letter) -> Self {
        Self::from_word(n, vec![letter], Scalar::one())
    }

    pub fn raise(n: usize, i: usize) -> Self {
        assert!((1..n).contains(&i), "raising index {i} out of range for n = {n}");
        Self::from_letter(n, Letter::Raise(i))
    }

    pub fn lower(n: usize, i: usize) -> Self {
        assert!((1..n).contains(&i), "lowering index {i} out of range for n = {n}");
        Self::from_letter(n, Letter::Lower(i))
    }

    pub fn cartan(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "Cartan index {i} out of range for n = {n}");
        Self::from_letter(n, Letter::Cartan(i))
    }

    pub fn group(n: usize, halves: HalfWeights) -> Self {
        assert_eq!(halves.len(), n);
        Self::from_word(n, vec![Letter::Group(halves)], Scalar::one())
    }

    pub fn from_word(n: usize, word: Word, coeff: Scalar) -> Self {
        let mut e = Self::zero(n);
        e.add_term(word, coeff);
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, word: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let word = normalize_word(word);
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        let terms = self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect();
        AlgebraElement { n: self.n, terms }
    }

    /// Bilinear concatenation product of words.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                for l in wb {
                    merge_push(&mut w, l.clone());
                }
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    /// Apply a letterwise map homomorphically (word order kept).
    fn map_letters(&self, mut f: impl FnMut(&Letter) -> (Scalar, Vec<Letter>)) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            let mut coeff = c.clone();
            let mut word = Word::with_capacity(w.len());
            for l in w {
                let (s, ls) = f(l);
                coeff *= &s;
                for x in ls {
                    merge_push(&mut word, x);
                }
            }
            out.add_term(word, coeff);
        }
        out
    }

    /// Apply a letterwise map antihomomorphically (word reversed).
    fn map_letters_rev(&self, mut f: impl FnMut(&Letter) -> (Scalar, Vec<Letter>)) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            let mut coeff = c.clone();
            let mut word = Word::with_capacity(w.len());
            for l in w.iter().rev() {
                let (s, ls) = f(l);
                coeff *= &s;
                for x in ls {
                    merge_push(&mut word, x);
                }
            }
            out.add_term(word, coeff);
        }
        out
    }

    /// Coproduct, extended to words as the ordered product of letter
    /// coproducts.
    pub fn coproduct(&self) -> TensorElement {
        let mut out = TensorElement::zero(self.n);
        for (w, c) in &self.terms {
            let mut branches: Vec<(Word, Word, Scalar)> =
                vec![(Word::new(), Word::new(), c.clone())];
            for l in w {
                let legs = coproduct_letter(self.n, l);
                let mut next = Vec::with_capacity(branches.len() * legs.len());
                for (left, right, coeff) in &branches {
                    for (ll, rl) in &legs {
                        let mut nl = left.clone();
                        let mut nr = right.clone();
                        for x in ll {
                            merge_push(&mut nl, x.clone());
                        }
                        for x in rl {
                            merge_push(&mut nr, x.clone());
                        }
                        next.push((nl, nr, coeff.clone()));
                    }
                }
                branches = next;
            }
            for (l, r, coeff) in branches {
                out.add_term(l, r, coeff);
            }
        }
        out
    }

    /// Antipode: word-reversing, `S(x_i^±) = -q^(∓1) x_i^±`, `S(h) = -h`,
    /// inverse on group-likes.
    pub fn antipode(&self) -> Self {
        self.map_letters_rev(antipode_letter)
    }

    /// Inverse antipode, letterwise.
    pub fn antipode_inv(&self) -> Self {
        self.map_letters_rev(antipode_inv_letter)
    }

    /// Counit: kills any word containing a non-group letter; group-like
    /// words map to 1.
    pub fn counit(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, c) in &self.terms {
            if w.iter().all(|l| matches!(l, Letter::Group(_))) {
                acc += c;
            }
        }
        acc
    }

    /// Cartan involution: swaps raising and lowering, negates the Cartan
    /// part. Algebra automorphism, coalgebra antiautomorphism.
    pub fn theta(&self) -> Self {
        self.map_letters(|l| match l {
            Letter::Raise(i) => (Scalar::one(), vec![Letter::Lower(*i)]),
            Letter::Lower(i) => (Scalar::one(), vec![Letter::Raise(*i)]),
            Letter::Cartan(i) => (-Scalar::one(), vec![Letter::Cartan(*i)]),
            Letter::Group(mu) => (Scalar::one(), vec![Letter::Group(neg_mu(mu))]),
        })
    }

    /// The involutive algebra antiautomorphism fixing the Cartan part and
    /// swapping raising with lowering.
    pub fn dagger(&self) -> Self {
        self.map_letters_rev(|l| match l {
            Letter::Raise(i) => (Scalar::one(), vec![Letter::Lower(*i)]),
            Letter::Lower(i) => (Scalar::one(), vec![Letter::Raise(*i)]),
            Letter::Cartan(i) => (Scalar::one(), vec![Letter::Cartan(*i)]),
            Letter::Group(mu) => (Scalar::one(), vec![Letter::Group(mu.clone())]),
        })
    }

    /// Diagram automorphism: `x_i^± -> -x_(n-i)^±`, `h_i -> h_(n-i)`,
    /// `h_n -> -h_n`; on group-like exponents `mu_a -> -mu_(n+1-a)`.
    pub fn tau(&self) -> Self {
        let n = self.n;
        self.map_letters(|l| match l {
            Letter::Raise(i) => (-Scalar::one(), vec![Letter::Raise(n - i)]),
            Letter::Lower(i) => (-Scalar::one(), vec![Letter::Lower(n - i)]),
            Letter::Cartan(i) if *i < n => (Scalar::one(), vec![Letter::Cartan(n - i)]),
            Letter::Cartan(_) => (-Scalar::one(), vec![Letter::Cartan(n)]),
            Letter::Group(mu) => {
                let nu: HalfWeights = mu.iter().rev().map(|&x| -x).collect();
                (Scalar::one(), vec![Letter::Group(nu)])
            }
        })
    }

    /// The antiautomorphism negating every generator (used to twist the
    /// dual representation).
    pub fn gamma(&self) -> Self {
        self.map_letters_rev(|l| match l {
            Letter::Raise(i) => (-Scalar::one(), vec![Letter::Raise(*i)]),
            Letter::Lower(i) => (-Scalar::one(), vec![Letter::Lower(*i)]),
            Letter::Cartan(i) => (-Scalar::one(), vec![Letter::Cartan(*i)]),
            Letter::Group(mu) => (Scalar::one(), vec![Letter::Group(neg_mu(mu))]),
        })
    }

    /// q-conjugation: conjugates every coefficient, fixes the generators,
    /// inverts group-likes (see the module docs).
    pub fn qconj_u(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            let word = w
                .iter()
                .map(|l| match l {
                    Letter::Group(mu) => Letter::Group(neg_mu(mu)),
                    other => other.clone(),
                })
                .collect();
            out.add_term(word, c.qconj());
        }
        out
    }

    /// Tilded antipode: q-conjugation composed with the antipode.
    pub fn tilde_s(&self) -> Self {
        self.antipode().qconj_u()
    }

    /// Tilded Cartan involution: q-conjugation composed with theta.
    pub fn tilde_theta(&self) -> Self {
        self.theta().qconj_u()
    }

    /// Estimated number of Sweedler terms in the expansion of the
    /// coproduct (two branches per non-group letter).
    pub fn sweedler_estimate(&self) -> u128 {
        self.terms
            .keys()
            .map(|w| {
                let branchy = w.iter().filter(|l| !matches!(l, Letter::Group(_))).count() as u32;
                1u128 << branchy.min(120)
            })
            .sum()
    }

    /// Quantum adjoint action `self ∘ b = sum self_(1) b S(self_(2))` as a
    /// free-algebra element, guarded by a term cap.
    pub fn adjoint_action(&self, b: &Self, cap: u128) -> Result<Self, UqError> {
        assert_eq!(self.n, b.n);
        let estimate = self.sweedler_estimate().saturating_mul(b.term_count() as u128);
        if estimate > cap {
            return Err(UqError::TermCap { estimate, cap });
        }
        let delta = self.coproduct();
        let mut out = Self::zero(self.n);
        for ((left, right), c) in &delta.terms {
            let s_right =
                AlgebraElement::from_word(self.n, right.clone(), Scalar::one()).antipode();
            for (wb, cb) in &b.terms {
                for (ws, cs) in &s_right.terms {
                    let mut word = left.clone();
                    for l in wb {
                        merge_push(&mut word, l.clone());
                    }
                    for l in ws {
                        merge_push(&mut word, l.clone());
                    }
                    out.add_term(word, &(c * cb) * cs);
                }
            }
        }
        Ok(out)
    }
}

fn neg_mu(mu: &HalfWeights) -> HalfWeights {
    mu.iter().map(|&x| -x).collect()
}

/// Letter coproduct as `(left word, right word)` pairs with coefficient 1.
pub(crate) fn coproduct_letter(n: usize, l: &Letter) -> Vec<(Word, Word)> {
    match l {
        Letter::Cartan(i) => vec![
            (vec![Letter::Cartan(*i)], Word::new()),
            (Word::new(), vec![Letter::Cartan(*i)]),
        ],
        Letter::Raise(i) => {
            let mu = cartan_half(n, *i);
            vec![
                (vec![Letter::Raise(*i)], vec![Letter::Group(neg_mu(&mu))]),
                (vec![Letter::Group(mu)], vec![Letter::Raise(*i)]),
            ]
        }
        Letter::Lower(i) => {
            let mu = cartan_half(n, *i);
            vec![
                (vec![Letter::Lower(*i)], vec![Letter::Group(neg_mu(&mu))]),
                (vec![Letter::Group(mu)], vec![Letter::Lower(*i)]),
            ]
        }
        Letter::Group(mu) => {
            vec![(vec![Letter::Group(mu.clone())], vec![Letter::Group(mu.clone())])]
        }
    }
}

fn antipode_letter(l: &Letter) -> (Scalar, Vec<Letter>) {
    match l {
        Letter::Raise(i) => (-Scalar::q_pow(-1), vec![Letter::Raise(*i)]),
        Letter::Lower(i) => (-Scalar::q_pow(1), vec![Letter::Lower(*i)]),
        Letter::Cartan(i) => (-Scalar::one(), vec![Letter::Cartan(*i)]),
        Letter::Group(mu) => (Scalar::one(), vec![Letter::Group(neg_mu(mu))]),
    }
}

fn antipode_inv_letter(l: &Letter) -> (Scalar, Vec<Letter>) {
    match l {
        Letter::Raise(i) => (-Scalar::q_pow(1), vec![Letter::Raise(*i)]),
        Letter::Lower(i) => (-Scalar::q_pow(-1), vec![Letter::Lower(*i)]),
        Letter::Cartan(i) => (-Scalar::one(), vec![Letter::Cartan(*i)]),
        Letter::Group(mu) => (Scalar::one(), vec![Letter::Group(neg_mu(mu))]),
    }
}

/// Element of the twofold tensor product, in Sweedler-expanded form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    n: usize,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorElement {
    pub fn zero(n: usize) -> Self {
        TensorElement { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Scalar> {
        &self.terms
    }

    pub fn add_term(&mut self, left: Word, right: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let key = (normalize_word(left), normalize_word(right));
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Swap the two legs.
    pub fn flip(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((l, r), c) in &self.terms {
            out.add_term(r.clone(), l.clone(), c.clone());
        }
        out
    }

    /// Apply an element map to both legs.
    pub fn map_legs(&self, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> Self {
        let mut out = Self::zero(self.n);
        for ((l, r), c) in &self.terms {
            let fl = f(&AlgebraElement::from_word(self.n, l.clone(), Scalar::one()));
            let fr = f(&AlgebraElement::from_word(self.n, r.clone(), Scalar::one()));
            for (wl, cl) in &fl.terms {
                for (wr, cr) in &fr.terms {
                    out.add_term(wl.clone(), wr.clone(), &(c * cl) * cr);
                }
            }
        }
        out
    }

    /// Evaluate in a pair of representations, as a Kronecker-product matrix.
    pub fn image(&self, r1: &Rep, r2: &Rep) -> Matrix {
        let mut acc = Matrix::zeros(r1.dim() * r2.dim(), r1.dim() * r2.dim());
        for ((l, r), c) in &self.terms {
            let ml = r1.word_image(l);
            let mr = r2.word_image(r);
            acc = acc.add(&ml.kron(&mr).scale(c));
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum RepRule {
    /// The vector representation: `x_i^+ -> e_(i,i+1)`, `x_i^- -> e_(i+1,i)`.
    Vector,
    /// The dual twisted by the negating antiautomorphism instead of the
    /// antipode: `a -> transpose(gamma(a))` in the vector representation.
    TwistedDual,
    Tensor(Box<Rep>, Box<Rep>),
}

/// A representation, given by letter images; group-like images follow a
/// rule from the exponent vector.
#[derive(Debug, Clone)]
pub struct Rep {
    n: usize,
    dim: usize,
    rule: RepRule,
}

impl Rep {
    /// The vector representation of `gl_n`.
    pub fn vector(n: usize) -> Rep {
        let rep = Rep { n, dim: n, rule: RepRule::Vector };
        rep.check_relations().expect("vector representation satisfies the defining relations");
        rep
    }

    /// The twisted dual of the vector representation.
    pub fn twisted_dual(n: usize) -> Rep {
        let rep = Rep { n, dim: n, rule: RepRule::TwistedDual };
        rep.check_relations().expect("twisted dual satisfies the defining relations");
        rep
    }

    /// Tensor product through the coproduct; re-checks the defining
    /// relations on the combined images.
    pub fn tensor(r1: &Rep, r2: &Rep) -> Result<Rep, UqError> {
        assert_eq!(r1.n, r2.n);
        let rep = Rep {
            n: r1.n,
            dim: r1.dim * r2.dim,
            rule: RepRule::Tensor(Box::new(r1.clone()), Box::new(r2.clone())),
        };
        rep.check_relations()?;
        Ok(rep)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group_image(&self, halves: &[i32]) -> Matrix {
        match &self.rule {
            RepRule::Vector => {
                Matrix::diagonal(halves.iter().map(|&h| Scalar::s_pow(h as i64)).collect())
            }
            RepRule::TwistedDual => {
                Matrix::diagonal(halves.iter().map(|&h| Scalar::s_pow(-h as i64)).collect())
            }
            RepRule::Tensor(a, b) => a.group_image(halves).kron(&b.group_image(halves)),
        }
    }

    pub fn letter_image(&self, l: &Letter) -> Matrix {
        match (&self.rule, l) {
            (_, Letter::Group(mu)) => self.group_image(mu),
            (RepRule::Vector, Letter::Raise(i)) => Matrix::unit(self.n, *i, i + 1),
            (RepRule::Vector, Letter::Lower(i)) => Matrix::unit(self.n, i + 1, *i),
            (RepRule::Vector, Letter::Cartan(i)) => {
                if *i == self.n {
                    Matrix::identity(self.n)
                } else {
                    Matrix::unit(self.n, *i, *i).sub(&Matrix::unit(self.n, i + 1, i + 1))
                }
            }
            (RepRule::TwistedDual, Letter::Raise(i)) => {
                Matrix::unit(self.n, i + 1, *i).scale(&-Scalar::one())
            }
            (RepRule::TwistedDual, Letter::Lower(i)) => {
                Matrix::unit(self.n, *i, i + 1).scale(&-Scalar::one())
            }
            (RepRule::TwistedDual, Letter::Cartan(i)) => {
                if *i == self.n {
                    Matrix::identity(self.n).scale(&-Scalar::one())
                } else {
                    Matrix::unit(self.n, i + 1, i + 1).sub(&Matrix::unit(self.n, *i, *i))
                }
            }
            (RepRule::Tensor(a, b), letter) => {
                // (r1 (x) r2) of the letter coproduct.
                let mut acc = Matrix::zeros(self.dim, self.dim);
                for (lw, rw) in coproduct_letter(self.n, letter) {
                    acc = acc.add(&a.word_image(&lw).kron(&b.word_image(&rw)));
                }
                acc
            }
        }
    }

    pub fn word_image(&self, w: &Word) -> Matrix {
        let mut acc = Matrix::identity(self.dim);
        for l in w {
            acc = acc.matmul(&self.letter_image(l));
        }
        acc
    }

    pub fn element_image(&self, a: &AlgebraElement) -> Matrix {
        assert_eq!(self.n, a.n);
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for (w, c) in &a.terms {
            acc = acc.add(&self.word_image(w).scale(c));
        }
        acc
    }

    /// Verify the defining relations on the letter images: Cartan
    /// commutativity, the Cartan action on the Chevalley generators, the
    /// raising/lowering commutator, and both q-Serre families.
    pub fn check_relations(&self) -> Result<(), UqError> {
        let n = self.n;
        let fail = |what: String| Err(UqError::RelationCheck(what));
        let h: Vec<Matrix> = (1..=n).map(|i| self.letter_image(&Letter::Cartan(i))).collect();
        let xp: Vec<Matrix> = (1..n).map(|i| self.letter_image(&Letter::Raise(i))).collect();
        let xm: Vec<Matrix> = (1..n).map(|i| self.letter_image(&Letter::Lower(i))).collect();
        for i in 0..n {
            for j in 0..n {
                if !h[i].commutator(&h[j]).is_zero() {
                    return fail(format!("[h_{}, h_{}] != 0", i + 1, j + 1));
                }
            }
        }
        // Cartan matrix of type A on the first n-1 labels, zero row for the
        // central h_n.
        let a_ij = |i: usize, j: usize| -> i64 {
            if i == n {
                0
            } else if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            }
        };
        for i in 1..=n {
            for j in 1..n {
                let c = Scalar::from_int(a_ij(i, j));
                if h[i - 1].commutator(&xp[j - 1]) != xp[j - 1].scale(&c) {
                    return fail(format!("[h_{i}, x_{j}^+] != a_({i},{j}) x_{j}^+"));
                }
                if h[i - 1].commutator(&xm[j - 1]) != xm[j - 1].scale(&-c) {
                    return fail(format!("[h_{i}, x_{j}^-] != -a_({i},{j}) x_{j}^-"));
                }
            }
        }
        let denom_inv = Scalar::q_minus_qinv().inv().unwrap();
        for i in 1..n {
            for j in 1..n {
                let lhs = xp[i - 1].commutator(&xm[j - 1]);
                let rhs = if i == j {
                    let plus = self.group_image(&full_cartan(n, i));
                    let minus = self.group_image(&neg_mu(&full_cartan(n, i)));
                    plus.sub(&minus).scale(&denom_inv)
                } else {
                    Matrix::zeros(self.dim, self.dim)
                };
                if lhs != rhs {
                    return fail(format!("[x_{i}^+, x_{j}^-] relation"));
                }
            }
        }
        let q_plus_qinv = Scalar::q_pow(1) + Scalar::q_pow(-1);
        for family in [&xp, &xm] {
            for i in 1..n {
                for j in 1..n {
                    let (a, b) = (&family[i - 1], &family[j - 1]);
                    if i.abs_diff(j) == 1 {
                        let serre = a
                            .matmul(a)
                            .matmul(b)
                            .sub(&a.matmul(b).matmul(a).scale(&q_plus_qinv))
                            .add(&b.matmul(a).matmul(a));
                        if !serre.is_zero() {
                            return fail(format!("q-Serre relation at ({i},{j})"));
                        }
                    } else if i.abs_diff(j) >= 2 && !a.commutator(b).is_zero() {
                        return fail(format!("distant-commutation relation at ({i},{j})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Half-weight vector for `q^(h_i)`.
fn full_cartan(n: usize, i: usize) -> HalfWeights {
    let mut mu = vec![0i32; n];
    mu[i - 1] = 2;
    mu[i] = -2;
    mu
}

/// `rho(a ∘ b)` computed as a fold of letter-level sandwich steps over the
/// words of `a`, without materializing the symbolic product. Exactly equal
/// to evaluating [`AlgebraElement::adjoint_action`] in `rho`.
pub fn adjoint_image(a: &AlgebraElement, b_image: &Matrix, rep: &Rep) -> Matrix {
    let mut acc = Matrix::zeros(rep.dim(), rep.dim());
    for (w, c) in a.terms() {
        let mut m = b_image.clone();
        for l in w.iter().rev() {
            m = sandwich_step(l, &m, rep);
        }
        acc = acc.add(&m.scale(c));
    }
    acc
}

fn sandwich_step(l: &Letter, m: &Matrix, rep: &Rep) -> Matrix {
    match l {
        Letter::Cartan(_) => {
            let h = rep.letter_image(l);
            h.matmul(m).sub(&m.matmul(&h))
        }
        Letter::Group(mu) => {
            let g = rep.group_image(mu);
            let ginv = rep.group_image(&neg_mu(mu));
            g.matmul(m).matmul(&ginv)
        }
        Letter::Raise(i) => {
            let x = rep.letter_image(l);
            let g = rep.group_image(&cartan_half(rep.n(), *i));
            let first = x.matmul(m).matmul(&g);
            let second = g.matmul(m).matmul(&x).scale(&Scalar::q_pow(-1));
            first.sub(&second)
        }
        Letter::Lower(i) => {
            let x = rep.letter_image(l);
            let g = rep.group_image(&cartan_half(rep.n(), *i));
            let first = x.matmul(m).matmul(&g);
            let second = g.matmul(m).matmul(&x).scale(&Scalar::q_pow(1));
            first.sub(&second)
        }
    }
}

// ---------------------------------------------------------------------------
// Root vectors and tensor operators
// ---------------------------------------------------------------------------

/// The quantum analogue `E_ij` of the elementary matrix, `i != j`, by the
/// fixed-pivot recursion `E_ij = E_ik E_kj - q E_kj E_ik` with `k` adjacent
/// to `i`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> AlgebraElement {
    assert!(i != j, "diagonal units exist only inside group-like exponents");
    assert!((1..=n).contains(&i) && (1..=n).contains(&j), "indices out of range");
    if j == i + 1 {
        return AlgebraElement::raise(n, i);
    }
    if i == j + 1 {
        return AlgebraElement::lower(n, j);
    }
    let k = if i < j { i + 1 } else { i - 1 };
    let a = matrix_unit(n, i, k);
    let b = matrix_unit(n, k, j);
    a.product(&b).sum(&b.product(&a).scale(&-Scalar::q_pow(1)))
}

/// Variable-pivot variant used to test independence of the recursion from
/// the intermediate index.
pub fn matrix_unit_with_pivot(n: usize, i: usize, j: usize, k: usize) -> AlgebraElement {
    assert!((i < k && k < j) || (i > k && k > j), "pivot must lie strictly between");
    let a = matrix_unit(n, i, k);
    let b = matrix_unit(n, k, j);
    a.product(&b).sum(&b.product(&a).scale(&-Scalar::q_pow(1)))
}

/// The rescaled unit carrying its group-like prefactor: for `i != j` this is
/// `-(q - q^(-1)) q^(1/2) q^(-(E_ii + E_jj)/2) E_ij`; on the diagonal it is
/// the group-like `q^(-E_ii)`.
pub fn scaled_matrix_unit(n: usize, i: usize, j: usize) -> AlgebraElement {
    assert!((1..=n).contains(&i) && (1..=n).contains(&j), "indices out of range");
    if i == j {
        let mut mu = vec![0i32; n];
        mu[i - 1] = -2;
        return AlgebraElement::group(n, mu);
    }
    let mut mu = vec![0i32; n];
    mu[i - 1] = -1;
    mu[j - 1] = -1;
    let prefactor =
        AlgebraElement::group(n, mu).scale(&(-Scalar::q_minus_qinv() * Scalar::s_pow(1)));
    prefactor.product(&matrix_unit(n, i, j))
}

/// The tensor-operator component `T_ij`, whose adjoint transformation is by
/// matrix coefficients of the vector representation paired with its twisted
/// dual.
pub fn tensor_operator(n: usize, i: usize, j: usize) -> AlgebraElement {
    assert!((1..=n).contains(&i) && (1..=n).contains(&j), "indices out of range");
    let mut acc = if i == j { AlgebraElement::one(n) } else { AlgebraElement::zero(n) };
    let outer = -Scalar::q_pow(-(i as i64) - (j as i64));
    for k in 1..=i.min(j) {
        let term = scaled_matrix_unit(n, i, k)
            .product(&scaled_matrix_unit(n, k, j))
            .scale(&(&outer * &Scalar::q_pow(2 * k as i64)));
        acc = acc.sum(&term);
    }
    let front = (Scalar::q_pow(i as i64) / Scalar::q_minus_qinv()).unwrap();
    acc.scale(&front)
}

// ---------------------------------------------------------------------------
// Span expansion through a separating family
// ---------------------------------------------------------------------------

/// Stack the images of `a` under every representation into one column.
pub fn stacked_image(a: &AlgebraElement, reps: &[Rep]) -> Matrix {
    let rows: usize = reps.iter().map(|r| r.dim() * r.dim()).sum();
    let mut out = Matrix::zeros(rows, 1);
    let mut offset = 0;
    for rep in reps {
        let img = rep.element_image(a).vectorize();
        for r in 0..img.rows() {
            *out.at_mut(offset + r, 0) = img.at(r, 0).clone();
        }
        offset += img.rows();
    }
    out
}

/// Stack several columns side by side.
pub fn stacked_images(elements: &[AlgebraElement], reps: &[Rep]) -> Matrix {
    let cols: Vec<Matrix> = elements.iter().map(|a| stacked_image(a, reps)).collect();
    let rows = cols.first().map_or(0, Matrix::rows);
    Matrix::from_fn(rows, cols.len(), |r, c| cols[c].at(r, 0).clone())
}

/// Expand `x` over `basis` using joint evaluation in `reps`.
///
/// The stacked evaluation matrix of the basis must have full column rank
/// (the separating-family certificate, checked on every call); an
/// inconsistent system means `x` evaluates outside the span and is reported
/// as a span violation.
pub fn expand_in_span(
    x: &AlgebraElement,
    basis: &[AlgebraElement],
    reps: &[Rep],
) -> Result<Vec<Scalar>, UqError> {
    let m = stacked_images(basis, reps);
    let v = stacked_image(x, reps);
    match linalg::solve_exact(&m, &v) {
        Ok(sol) => Ok((0..basis.len()).map(|k| sol.at(k, 0).clone()).collect()),
        Err(LinalgError::Underdetermined { rank, cols }) => {
            Err(UqError::SeparatingFamily { rank, needed: cols })
        }
        Err(LinalgError::Inconsistent { row }) => Err(UqError::SpanViolation { row }),
        Err(e) => panic!("unexpected solve failure: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_plus(n: usize, i: usize) -> AlgebraElement {
        AlgebraElement::raise(n, i)
    }

    fn x_minus(n: usize, i: usize) -> AlgebraElement {
        AlgebraElement::lower(n, i)
    }

    #[test]
    fn product_concatenates_words() {
        let p = x_plus(2, 1).product(&x_minus(2, 1));
        assert_eq!(p.term_count(), 1);
        let (w, c) = p.terms().iter().next().unwrap();
        assert_eq!(w, &vec![Letter::Raise(1), Letter::Lower(1)]);
        assert_eq!(c, &Scalar::one());
    }

    #[test]
    fn unit_is_neutral_and_zero_absorbs() {
        let a = x_plus(3, 2).sum(&x_minus(3, 1).scale(&Scalar::q()));
        assert_eq!(a.product(&AlgebraElement::one(3)), a);
        assert_eq!(AlgebraElement::one(3).product(&a), a);
        assert!(a.scale(&Scalar::zero()).is_zero());
    }

    #[test]
    fn coproduct_of_cartan_is_primitive() {
        let d = AlgebraElement::cartan(3, 1).coproduct();
        let mut expect = TensorElement::zero(3);
        expect.add_term(vec![Letter::Cartan(1)], Word::new(), Scalar::one());
        expect.add_term(Word::new(), vec![Letter::Cartan(1)], Scalar::one());
        assert_eq!(d, expect);
    }

    #[test]
    fn coproduct_of_raise_has_group_legs() {
        let n = 3;
        let d = x_plus(n, 1).coproduct();
        let mu = cartan_half(n, 1);
        let mut expect = TensorElement::zero(n);
        expect.add_term(vec![Letter::Raise(1)], vec![Letter::Group(neg_mu(&mu))], Scalar::one());
        expect.add_term(vec![Letter::Group(mu)], vec![Letter::Raise(1)], Scalar::one());
        assert_eq!(d, expect);
    }

    #[test]
    fn coproduct_is_multiplicative_on_group_times_raise() {
        // Expanding the product of the two letter coproducts merges the
        // group-like legs.
        let n = 2;
        let mu = vec![2, 0];
        let g = AlgebraElement::group(n, mu.clone());
        let a = g.product(&x_plus(n, 1));
        let d = a.coproduct();
        let half = cartan_half(n, 1);
        let madd = |a: &HalfWeights, b: &HalfWeights| -> HalfWeights {
            a.iter().zip(b).map(|(x, y)| x + y).collect()
        };
        let mut expect = TensorElement::zero(n);
        expect.add_term(
            vec![Letter::Group(mu.clone()), Letter::Raise(1)],
            vec![Letter::Group(madd(&mu, &neg_mu(&half)))],
            Scalar::one(),
        );
        expect.add_term(
            vec![Letter::Group(madd(&mu, &half))],
            vec![Letter::Group(mu.clone()), Letter::Raise(1)],
            Scalar::one(),
        );
        assert_eq!(d, expect);
    }

    #[test]
    fn antipode_on_letters_and_words() {
        let n = 3;
        assert_eq!(x_plus(n, 1).antipode(), x_plus(n, 1).scale(&-Scalar::q_pow(-1)));
        // Antihomomorphism: S(x_i^+ x_j^-) = S(x_j^-) S(x_i^+) = x_j^- x_i^+.
        let p = x_plus(n, 1).product(&x_minus(n, 2));
        let expect = x_minus(n, 2).product(&x_plus(n, 1));
        assert_eq!(p.antipode(), expect);
    }

    #[test]
    fn counit_values() {
        let n = 3;
        assert_eq!(AlgebraElement::group(n, vec![1, -2, 1]).counit(), Scalar::one());
        assert_eq!(x_plus(n, 1).counit(), Scalar::zero());
        assert_eq!(AlgebraElement::cartan(n, 2).counit(), Scalar::zero());
    }

    #[test]
    fn involution_letter_images() {
        let n = 3;
        assert_eq!(x_plus(n, 1).theta(), x_minus(n, 1));
        assert_eq!(x_plus(n, 1).tau(), x_plus(n, 2).scale(&-Scalar::one()));
        // dagger is word-reversing: (x_1^+ x_2^+)^† = x_2^- x_1^-.
        let p = x_plus(n, 1).product(&x_plus(n, 2));
        assert_eq!(p.dagger(), x_minus(n, 2).product(&x_minus(n, 1)));
    }

    #[test]
    fn tau_respects_cartan_letters() {
        let n = 3;
        assert_eq!(AlgebraElement::cartan(n, 1).tau(), AlgebraElement::cartan(n, 2));
        assert_eq!(
            AlgebraElement::cartan(n, n).tau(),
            AlgebraElement::cartan(n, n).scale(&-Scalar::one())
        );
        // On half-weights: negate and reverse, so tau(q^(h_1/2)) = q^(h_2/2).
        let g = AlgebraElement::group(n, cartan_half(n, 1));
        assert_eq!(g.tau(), AlgebraElement::group(n, cartan_half(n, 2)));
    }

    #[test]
    fn qconj_u_conjugates_coefficients() {
        let n = 2;
        let a = x_plus(n, 1).scale(&Scalar::q_minus_qinv());
        assert_eq!(a.qconj_u(), x_plus(n, 1).scale(&-Scalar::q_minus_qinv()));
    }

    #[test]
    fn tilde_maps_on_generators() {
        let n = 2;
        assert_eq!(x_plus(n, 1).tilde_s(), x_plus(n, 1).scale(&-Scalar::q_pow(1)));
        let a = x_plus(n, 1)
            .product(&x_minus(n, 1))
            .scale(&Scalar::q_minus_qinv())
            .sum(&AlgebraElement::group(n, vec![1, -1]));
        assert_eq!(a.tilde_theta().tilde_theta(), a);
    }

    #[test]
    fn antipode_inverse_is_inverse() {
        let n = 3;
        let a = x_plus(n, 1)
            .product(&x_minus(n, 2))
            .sum(&AlgebraElement::cartan(n, 3).scale(&Scalar::q()));
        assert_eq!(a.antipode().antipode_inv(), a);
        assert_eq!(a.antipode_inv().antipode(), a);
    }

    #[test]
    fn theta_intertwines_antipodes_letterwise() {
        // S(theta(g)) = theta(S^(-1)(g)) on every generator letter, and the
        // same with dagger.
        let n = 3;
        let gens = [
            x_plus(n, 1),
            x_minus(n, 2),
            AlgebraElement::cartan(n, 1),
            AlgebraElement::group(n, vec![1, 0, -1]),
        ];
        for g in gens {
            assert_eq!(g.theta().antipode(), g.antipode_inv().theta());
            assert_eq!(g.dagger().antipode(), g.antipode_inv().dagger());
        }
    }

    #[test]
    fn matrix_unit_base_and_recursion() {
        let n = 3;
        assert_eq!(matrix_unit(n, 1, 2), x_plus(n, 1));
        // E_13 = x_1^+ x_2^+ - q x_2^+ x_1^+.
        let e13 = matrix_unit(n, 1, 3);
        let expect = x_plus(n, 1)
            .product(&x_plus(n, 2))
            .sum(&x_plus(n, 2).product(&x_plus(n, 1)).scale(&-Scalar::q()));
        assert_eq!(e13, expect);
        // E_31 = x_2^- x_1^- - q x_1^- x_2^-.
        let e31 = matrix_unit(n, 3, 1);
        let expect = x_minus(n, 2)
            .product(&x_minus(n, 1))
            .sum(&x_minus(n, 1).product(&x_minus(n, 2)).scale(&-Scalar::q()));
        assert_eq!(e31, expect);
    }

    #[test]
    fn scaled_unit_structure() {
        let n = 3;
        assert_eq!(scaled_matrix_unit(n, 2, 2), AlgebraElement::group(n, vec![0, -2, 0]));
        let e = scaled_matrix_unit(n, 1, 2);
        let mut expect = AlgebraElement::zero(n);
        expect.add_term(
            vec![Letter::Group(vec![-1, -1, 0]), Letter::Raise(1)],
            -Scalar::q_minus_qinv() * Scalar::s_pow(1),
        );
        assert_eq!(e, expect);
    }

    #[test]
    fn tensor_operator_degenerate_case() {
        // n = 1: T_11 = q (q - q^(-1))^(-1) (1 - q^(-2) q^2 q^(-2 E_11)).
        let t = tensor_operator(1, 1, 1);
        let front = (Scalar::q() / Scalar::q_minus_qinv()).unwrap();
        let mut expect = AlgebraElement::zero(1);
        expect.add_term(Word::new(), front.clone());
        expect.add_term(vec![Letter::Group(vec![-4])], -front);
        assert_eq!(t, expect);
    }

    #[test]
    fn tensor_operator_counit_vanishes() {
        for n in 1..=3 {
            for i in 1..=n {
                for j in 1..=n {
                    assert_eq!(tensor_operator(n, i, j).counit(), Scalar::zero());
                }
            }
        }
    }

    #[test]
    fn vector_rep_images() {
        let n = 2;
        let pi = Rep::vector(n);
        assert_eq!(pi.element_image(&x_plus(n, 1)), Matrix::unit(n, 1, 2));
        let pistar = Rep::twisted_dual(n);
        assert_eq!(
            pistar.element_image(&x_plus(n, 1)),
            Matrix::unit(n, 2, 1).scale(&-Scalar::one())
        );
    }

    #[test]
    fn scaled_unit_image_in_vector_rep() {
        let n = 3;
        let pi = Rep::vector(n);
        let img = pi.element_image(&scaled_matrix_unit(n, 1, 2));
        assert_eq!(img, Matrix::unit(n, 1, 2).scale(&-Scalar::q_minus_qinv()));
    }

    #[test]
    fn tensor_rep_images() {
        let n = 2;
        let pi = Rep::vector(n);
        let pp = Rep::tensor(&pi, &pi).unwrap();
        assert_eq!(pp.dim(), 4);
        let h1 = pp.element_image(&AlgebraElement::cartan(n, 1));
        let expect = Matrix::diagonal(vec![
            Scalar::from_int(2),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::from_int(-2),
        ]);
        assert_eq!(h1, expect);
        // Group-likes act by diagonal Kronecker products.
        let g = pp.group_image(&[1, -1]);
        let d = Matrix::diagonal(vec![Scalar::s_pow(1), Scalar::s_pow(-1)]);
        assert_eq!(g, d.kron(&d));
        let ps = Rep::tensor(&pi, &Rep::twisted_dual(n)).unwrap();
        assert_eq!(ps.dim(), n * n);
    }

    #[test]
    fn adjoint_action_of_cartan_is_root_scaling() {
        let n = 3;
        let pi = Rep::vector(n);
        for i in 1..=n {
            for j in 1..n {
                let a = AlgebraElement::cartan(n, i);
                let b = x_plus(n, j);
                let act = a.adjoint_action(&b, DEFAULT_TERM_CAP).unwrap();
                let aij: i64 = if i == n {
                    0
                } else if i == j {
                    2
                } else if i.abs_diff(j) == 1 {
                    -1
                } else {
                    0
                };
                assert_eq!(
                    pi.element_image(&act),
                    pi.element_image(&b).scale(&Scalar::from_int(aij))
                );
            }
        }
    }

    #[test]
    fn adjoint_action_unit_cases() {
        let n = 2;
        let b = x_plus(n, 1).product(&x_minus(n, 1)).scale(&Scalar::q());
        let one = AlgebraElement::one(n);
        assert_eq!(one.adjoint_action(&b, DEFAULT_TERM_CAP).unwrap(), b);
        // Acting on the unit gives the counit: eps(x_1^+) = 0.
        let on_unit = x_plus(n, 1).adjoint_action(&one, DEFAULT_TERM_CAP).unwrap();
        let pi = Rep::vector(n);
        assert!(pi.element_image(&on_unit).is_zero());
    }

    #[test]
    fn adjoint_image_matches_symbolic_adjoint() {
        let n = 2;
        let pi = Rep::vector(n);
        let pp = Rep::tensor(&pi, &pi).unwrap();
        let a = tensor_operator(n, 1, 2);
        let b = tensor_operator(n, 2, 2);
        let symbolic = a.adjoint_action(&b, DEFAULT_TERM_CAP).unwrap();
        for rep in [&pi, &pp] {
            let direct = adjoint_image(&a, &rep.element_image(&b), rep);
            assert_eq!(direct, rep.element_image(&symbolic));
        }
    }

    #[test]
    fn term_cap_guards_adjoint() {
        let n = 3;
        let a = matrix_unit(n, 1, 3).product(&matrix_unit(n, 3, 1));
        let b = AlgebraElement::one(n);
        match a.adjoint_action(&b, 3) {
            Err(UqError::TermCap { .. }) => {}
            other => panic!("expected term cap, got {other:?}"),
        }
    }

    #[test]
    fn expand_unit_vector() {
        let n = 2;
        let pi = Rep::vector(n);
        let pp = Rep::tensor(&pi, &pi).unwrap();
        let reps = vec![pi, pp];
        let basis: Vec<AlgebraElement> = vec![
            tensor_operator(n, 1, 1),
            tensor_operator(n, 1, 2),
            tensor_operator(n, 2, 1),
            tensor_operator(n, 2, 2),
        ];
        let c = expand_in_span(&basis[2], &basis, &reps).unwrap();
        assert_eq!(c[2], Scalar::one());
        for (k, v) in c.iter().enumerate() {
            if k != 2 {
                assert!(v.is_zero());
            }
        }
    }
}
