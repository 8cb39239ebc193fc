//! Free Lie algebra on `{T, W}` through grade 5 and its quotient by the
//! ideal generated by `[W,[T,W]]`.
//!
//! Lie monomials are embedded in the free associative algebra (words in
//! `T`, `W`), where brackets are commutators. Each grade gets a basis made of
//! chosen survivors plus a basis of the ideal's graded piece; coordinates come
//! from an exact rational solve, and ideal coordinates are dropped.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::CoeffPolynomial;

pub const MAX_GRADE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    T,
    W,
}

impl Gen {
    fn letter(self) -> u8 {
        match self {
            Gen::T => 0,
            Gen::W => 1,
        }
    }
}

/// A bracket expression in the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieTree {
    Gen(Gen),
    Br(Box<LieTree>, Box<LieTree>),
}

type Word = Vec<u8>;
type WordVec = BTreeMap<Word, BigRational>;

impl LieTree {
    pub fn bracket(a: LieTree, b: LieTree) -> Self {
        LieTree::Br(Box::new(a), Box::new(b))
    }

    /// Right-nested bracket `[g0,[g1,[...,gn]]]`, written `[g0,g1,...,gn]`.
    pub fn nested(gens: &[Gen]) -> Self {
        let (last, rest) = gens.split_last().expect("at least one generator");
        rest.iter().rev().fold(LieTree::Gen(*last), |acc, g| LieTree::bracket(LieTree::Gen(*g), acc))
    }

    /// Right-nested bracket from a string such as `"TWT"`.
    pub fn from_letters(s: &str) -> Self {
        let gens: Vec<Gen> = s
            .chars()
            .map(|c| match c {
                'T' => Gen::T,
                'W' => Gen::W,
                other => panic!("unknown generator {other}"),
            })
            .collect();
        Self::nested(&gens)
    }

    pub fn grade(&self) -> usize {
        match self {
            LieTree::Gen(_) => 1,
            LieTree::Br(a, b) => a.grade() + b.grade(),
        }
    }

    fn right_nested_letters(&self) -> Option<String> {
        match self {
            LieTree::Gen(Gen::T) => Some("T".into()),
            LieTree::Gen(Gen::W) => Some("W".into()),
            LieTree::Br(a, b) => match a.as_ref() {
                LieTree::Gen(_) => Some(a.right_nested_letters()? + &b.right_nested_letters()?),
                _ => None,
            },
        }
    }

    fn words(&self) -> WordVec {
        match self {
            LieTree::Gen(g) => {
                let mut v = WordVec::new();
                v.insert(vec![g.letter()], BigRational::one());
                v
            }
            LieTree::Br(a, b) => {
                let (x, y) = (a.words(), b.words());
                let mut out = word_product(&x, &y);
                for (w, c) in word_product(&y, &x) {
                    add_word(&mut out, w, -c);
                }
                out
            }
        }
    }
}

impl fmt::Display for LieTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self, self.right_nested_letters()) {
            (LieTree::Gen(_), Some(s)) => f.write_str(&s),
            (_, Some(s)) => {
                let parts: Vec<String> = s.chars().map(String::from).collect();
                write!(f, "[{}]", parts.join(","))
            }
            (LieTree::Br(a, b), None) => write!(f, "[{a},{b}]"),
            (LieTree::Gen(_), None) => unreachable!(),
        }
    }
}

fn add_word(v: &mut WordVec, w: Word, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(w.clone()).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&w);
    }
}

fn word_product(x: &WordVec, y: &WordVec) -> WordVec {
    let mut out = WordVec::new();
    for (wa, ca) in x {
        for (wb, cb) in y {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            add_word(&mut out, w, ca * cb);
        }
    }
    out
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

fn lyndon_tree(w: &[u8]) -> LieTree {
    if w.len() == 1 {
        return LieTree::Gen(if w[0] == 0 { Gen::T } else { Gen::W });
    }
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("proper Lyndon suffix");
    LieTree::bracket(lyndon_tree(&w[..split]), lyndon_tree(&w[split..]))
}

/// Lyndon words of the given length, in lexicographic order.
fn lyndon_words(len: usize) -> Vec<Word> {
    (0..1u32 << len)
        .map(|bits| (0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect::<Word>())
        .filter(|w| is_lyndon(w))
        .collect()
}

/// Dimension of the free Lie algebra's grade-`g` piece on two generators.
pub fn free_dimension(grade: usize) -> usize {
    lyndon_words(grade).len()
}

/// Exact coordinates in a fixed set of independent word vectors.
#[derive(Debug)]
struct Reducer {
    pivots: Vec<Word>,
    inverse: Vec<Vec<BigRational>>,
    columns: Vec<WordVec>,
}

impl Reducer {
    fn new(columns: Vec<WordVec>) -> Self {
        let k = columns.len();
        let words: Vec<Word> = {
            let mut all: Vec<Word> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
            all.sort();
            all.dedup();
            all
        };
        let mut rows: Vec<Vec<BigRational>> = words
            .iter()
            .map(|w| columns.iter().map(|c| c.get(w).cloned().unwrap_or_else(BigRational::zero)).collect())
            .collect();
        let mut used = vec![false; rows.len()];
        let mut pivots = Vec::with_capacity(k);
        for col in 0..k {
            let r = (0..rows.len())
                .find(|&r| !used[r] && !rows[r][col].is_zero())
                .expect("basis columns are linearly dependent");
            used[r] = true;
            pivots.push(r);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !used[i] && !row[col].is_zero() {
                    let f = &row[col] / &pivot_row[col];
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= &f * p;
                    }
                }
            }
        }
        let sub: Vec<Vec<BigRational>> = pivots
            .iter()
            .map(|&r| columns.iter().map(|c| c.get(&words[r]).cloned().unwrap_or_else(BigRational::zero)).collect())
            .collect();
        let inverse = invert(sub).expect("pivot submatrix is invertible");
        Self { pivots: pivots.into_iter().map(|r| words[r].clone()).collect(), inverse, columns }
    }

    fn coordinates(&self, v: &WordVec) -> Vec<BigRational> {
        let rhs: Vec<BigRational> =
            self.pivots.iter().map(|w| v.get(w).cloned().unwrap_or_else(BigRational::zero)).collect();
        let x: Vec<BigRational> = self
            .inverse
            .iter()
            .map(|row| row.iter().zip(&rhs).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect();
        let mut check = v.clone();
        for (c, col) in x.iter().zip(&self.columns) {
            for (w, a) in col {
                add_word(&mut check, w.clone(), -(c * a));
            }
        }
        assert!(check.is_empty(), "vector is not a Lie element of this grade");
        x
    }
}

fn invert(mut m: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        inv.swap(col, p);
        let d = m[col][col].clone();
        for x in m[col].iter_mut().chain(inv[col].iter_mut()) {
            *x /= &d;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let (a, b) = (&m[col][j] * &f, &inv[col][j] * &f);
                    m[r][j] -= a;
                    inv[r][j] -= b;
                }
            }
        }
    }
    Some(inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Free,
    Quotient,
}

#[derive(Debug, Clone)]
pub struct BasisElement {
    pub tree: LieTree,
    pub grade: usize,
    pub label: String,
}

type Combination = Vec<(usize, BigRational)>;

/// Graded basis, exact structure constants and reduction maps.
#[derive(Debug)]
pub struct Algebra {
    kind: AlgebraKind,
    basis: Vec<BasisElement>,
    ideal: Vec<Vec<LieTree>>,
    reducers: Vec<Reducer>,
    table: Vec<Vec<Option<Combination>>>,
}

/// The relation generating the ideal: `[W,[T,W]]`.
pub fn relation() -> LieTree {
    LieTree::from_letters("WTW")
}

fn quotient_survivors(grade: usize) -> Vec<LieTree> {
    let letters: &[&str] = match grade {
        1 => &["T", "W"],
        2 => &["TW"],
        3 => &["TWT"],
        4 => &["TTTW"],
        5 => &["TTTTW", "WTTTW"],
        _ => &[],
    };
    letters.iter().map(|s| LieTree::from_letters(s)).collect()
}

fn ideal_span(grade: usize) -> Vec<LieTree> {
    let r = relation();
    let t = || LieTree::Gen(Gen::T);
    let w = || LieTree::Gen(Gen::W);
    match grade {
        3 => vec![r],
        4 => vec![LieTree::bracket(t(), r.clone()), LieTree::bracket(w(), r)],
        5 => {
            let mut out = Vec::new();
            for a in [Gen::T, Gen::W] {
                for b in [Gen::T, Gen::W] {
                    out.push(LieTree::bracket(
                        LieTree::Gen(a),
                        LieTree::bracket(LieTree::Gen(b), r.clone()),
                    ));
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

impl Algebra {
    fn build(kind: AlgebraKind) -> Self {
        let mut basis = Vec::new();
        let mut ideal = vec![Vec::new()];
        let mut reducers = Vec::new();
        for grade in 1..=MAX_GRADE {
            let survivors: Vec<LieTree> = match kind {
                AlgebraKind::Free => lyndon_words(grade).iter().map(|w| lyndon_tree(w)).collect(),
                AlgebraKind::Quotient => quotient_survivors(grade),
            };
            let id = if kind == AlgebraKind::Quotient { ideal_span(grade) } else { Vec::new() };
            assert_eq!(survivors.len() + id.len(), free_dimension(grade), "grade {grade} basis size");
            let columns: Vec<WordVec> = survivors.iter().chain(&id).map(LieTree::words).collect();
            reducers.push(Reducer::new(columns));
            for tree in survivors {
                basis.push(BasisElement { label: tree.to_string(), grade, tree });
            }
            ideal.push(id);
        }
        let mut alg = Self { kind, basis, ideal, reducers, table: Vec::new() };
        let n = alg.basis.len();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (bi, bj) = (&alg.basis[i], &alg.basis[j]);
                        (bi.grade + bj.grade <= MAX_GRADE).then(|| {
                            let tree = LieTree::bracket(bi.tree.clone(), bj.tree.clone());
                            alg.reduce_words(tree.grade(), &tree.words())
                        })
                    })
                    .collect()
            })
            .collect();
        alg.table = table;
        alg
    }

    pub fn free() -> &'static Algebra {
        static FREE: OnceLock<Algebra> = OnceLock::new();
        FREE.get_or_init(|| Algebra::build(AlgebraKind::Free))
    }

    pub fn quotient() -> &'static Algebra {
        static QUOTIENT: OnceLock<Algebra> = OnceLock::new();
        QUOTIENT.get_or_init(|| Algebra::build(AlgebraKind::Quotient))
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Trees spanning the ideal's grade-`g` piece (empty for the free algebra).
    pub fn ideal_basis(&self, grade: usize) -> &[LieTree] {
        self.ideal.get(grade).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dimension(&self, grade: usize) -> usize {
        self.basis.iter().filter(|b| b.grade == grade).count()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    fn reduce_words(&self, grade: usize, v: &WordVec) -> Combination {
        let reducer = &self.reducers[grade - 1];
        let offset: usize = self.basis.iter().take_while(|b| b.grade < grade).count();
        let keep = self.basis.iter().filter(|b| b.grade == grade).count();
        reducer
            .coordinates(v)
            .into_iter()
            .take(keep)
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (offset + i, c))
            .collect()
    }

    /// Reduces a bracket expression through the associative embedding.
    pub fn reduce(&self, tree: &LieTree) -> LieElement {
        let g = tree.grade();
        if g > MAX_GRADE {
            return LieElement { coeffs: BTreeMap::new(), truncated: true };
        }
        let mut out = LieElement::zero();
        for (i, c) in self.reduce_words(g, &tree.words()) {
            out.coeffs.insert(i, CoeffPolynomial::constant(c));
        }
        out
    }

    pub fn generator(&self, g: Gen) -> LieElement {
        self.basis_element(self.index_of(if g == Gen::T { "T" } else { "W" }).expect("generator"))
    }

    pub fn basis_element(&self, i: usize) -> LieElement {
        let mut out = LieElement::zero();
        out.coeffs.insert(i, CoeffPolynomial::one());
        out
    }

    /// Bilinear bracket via the structure constants; grades above 5 are dropped.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut acc: BTreeMap<usize, CoeffPolynomial> = BTreeMap::new();
        let mut truncated = x.truncated || y.truncated;
        for (&i, p) in &x.coeffs {
            for (&j, q) in &y.coeffs {
                match &self.table[i][j] {
                    None => truncated = true,
                    Some(comb) if comb.is_empty() => {}
                    Some(comb) => {
                        let pq = p * q;
                        for (k, c) in comb {
                            let e = acc.entry(*k).or_default();
                            *e = &*e + &pq.scale(c);
                        }
                    }
                }
            }
        }
        acc.retain(|_, p| !p.is_zero());
        LieElement { coeffs: acc, truncated }
    }

    /// Right-nested bracket `[x0,[x1,[...,xn]]]`.
    pub fn nest(&self, xs: &[&LieElement]) -> LieElement {
        let (last, rest) = xs.split_last().expect("non-empty");
        rest.iter().rev().fold((*last).clone(), |acc, x| self.bracket(x, &acc))
    }

    pub fn coefficient(&self, x: &LieElement, label: &str) -> CoeffPolynomial {
        let i = self.index_of(label).unwrap_or_else(|| panic!("no basis element {label}"));
        x.coeffs.get(&i).cloned().unwrap_or_default()
    }

    pub fn display(&self, x: &LieElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.coeffs
            .iter()
            .map(|(i, p)| format!("({p}) {}", self.basis[*i].label))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Polynomial-weighted combination of basis elements of one [`Algebra`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    coeffs: BTreeMap<usize, CoeffPolynomial>,
    truncated: bool,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether some bracket of grade above 5 was discarded along the way.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, CoeffPolynomial> {
        &self.coeffs
    }

    pub fn scale(&self, p: &CoeffPolynomial) -> Self {
        let mut coeffs: BTreeMap<usize, CoeffPolynomial> =
            self.coeffs.iter().map(|(i, c)| (*i, c * p)).collect();
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs, truncated: self.truncated }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&CoeffPolynomial::constant(r.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (i, p) in &other.coeffs {
            let e = coeffs.entry(*i).or_default();
            *e = &*e + p;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs, truncated: self.truncated || other.truncated }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_rational(&-BigRational::one()))
    }

    /// Terms whose basis element has the given grade.
    pub fn grade_part(&self, alg: &Algebra, grade: usize) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| alg.basis[**i].grade == grade)
                .map(|(i, p)| (*i, p.clone()))
                .collect(),
            truncated: self.truncated,
        }
    }
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
