//! Exact polynomials in `c0..c4` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const NVARS: usize = 5;

/// Exponent vector of a monomial `c0^e0 ... c4^e4`.
pub type Monomial = [u8; NVARS];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoeffPolynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl CoeffPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term([0; NVARS], c);
        p
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The variable `c_k`.
    pub fn var(k: usize) -> Self {
        assert!(k < NVARS, "variable index out of range");
        let mut m = [0; NVARS];
        m[k] = 1;
        let mut p = Self::zero();
        p.add_term(m, BigRational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|&e| e as u32).sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Partial derivative with respect to `c_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[k] > 0 {
                let mut m2 = *m;
                m2[k] -= 1;
                out.add_term(m2, c * BigRational::from_integer(BigInt::from(m[k])));
            }
        }
        out
    }

    pub fn eval_exact(&self, c: &[BigRational; NVARS]) -> BigRational {
        let mut sum = BigRational::zero();
        for (m, coeff) in &self.terms {
            let mut t = coeff.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &c[k];
                }
            }
            sum += t;
        }
        sum
    }

    /// Exact value at the rationals equal to the given doubles, rounded once.
    pub fn eval_at_doubles(&self, c: &[f64; NVARS]) -> f64 {
        let exact = c.map(|x| BigRational::from_float(x).expect("finite input"));
        self.eval_exact(&exact).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.to_f64().unwrap_or(f64::NAN))).collect(),
        }
    }

    /// Parses expressions such as `1/6*c1^2*(c0 - 4c2) + c3`.
    ///
    /// Juxtaposition multiplies, `/` divides by an integer literal.
    pub fn parse(text: &str) -> Result<Self, String> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(format!("unexpected token {:?}", p.tokens[p.pos]));
        }
        Ok(out)
    }
}

impl From<i64> for CoeffPolynomial {
    fn from(n: i64) -> Self {
        Self::constant(rat(n, 1))
    }
}

impl Add for &CoeffPolynomial {
    type Output = CoeffPolynomial;
    fn add(self, rhs: &CoeffPolynomial) -> CoeffPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &CoeffPolynomial {
    type Output = CoeffPolynomial;
    fn sub(self, rhs: &CoeffPolynomial) -> CoeffPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &CoeffPolynomial {
    type Output = CoeffPolynomial;
    fn mul(self, rhs: &CoeffPolynomial) -> CoeffPolynomial {
        let mut out = CoeffPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = *ma;
                for k in 0..NVARS {
                    m[k] += mb[k];
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Neg for &CoeffPolynomial {
    type Output = CoeffPolynomial;
    fn neg(self) -> CoeffPolynomial {
        CoeffPolynomial { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CoeffPolynomial {
            type Output = CoeffPolynomial;
            fn $f(self, rhs: CoeffPolynomial) -> CoeffPolynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CoeffPolynomial {
    type Output = CoeffPolynomial;
    fn neg(self) -> CoeffPolynomial {
        -&self
    }
}

fn monomial_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    let deg = |m: &Monomial| m.iter().map(|&e| e as u32).sum::<u32>();
    deg(a).cmp(&deg(b)).then_with(|| b.cmp(a))
}

/// Canonical text: terms by ascending total degree, then by descending exponents.
impl fmt::Display for CoeffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| monomial_order(a, b));
        for (i, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { format!("c{k}") } else { format!("c{k}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Floating-point copy of a polynomial for fast evaluation.
#[derive(Debug, Clone)]
pub struct FloatPoly {
    terms: Vec<(Monomial, f64)>,
}

impl FloatPoly {
    pub fn eval(&self, c: &[f64; NVARS]) -> f64 {
        self.terms
            .iter()
            .map(|(m, coeff)| {
                m.iter().enumerate().fold(*coeff, |acc, (k, &e)| acc * c[k].powi(e as i32))
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' | '\n' => {}
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            'c' => {
                let d = chars.get(i + 1).and_then(|c| c.to_digit(10)).ok_or("expected digit after c")?;
                if d as usize >= NVARS {
                    return Err(format!("unknown variable c{d}"));
                }
                out.push(Tok::Var(d as usize));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                out.push(Tok::Int(s.parse().map_err(|_| format!("bad integer {s}"))?));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<CoeffPolynomial, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CoeffPolynomial, String> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    match self.tokens.get(self.pos).cloned() {
                        Some(Tok::Int(n)) if !n.is_zero() => {
                            self.pos += 1;
                            acc = acc.scale(&BigRational::new(BigInt::one(), n));
                        }
                        _ => return Err("division only by a nonzero integer literal".into()),
                    }
                }
                Some(Tok::Int(_) | Tok::Var(_) | Tok::LParen) => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<CoeffPolynomial, String> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-self.power()?);
        }
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e = n.to_u32().filter(|&e| e <= 64).ok_or("exponent too large")?;
                    return Ok(base.pow(e));
                }
                _ => return Err("expected integer exponent".into()),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<CoeffPolynomial, String> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(CoeffPolynomial::constant(BigRational::from_integer(n)))
            }
            Some(Tok::Var(k)) => {
                self.pos += 1;
                Ok(CoeffPolynomial::var(k))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(format!("unexpected {other:?}")),
        }
    }
}
