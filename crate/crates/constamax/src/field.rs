//! Exact arithmetic in prime-power fields GF(p^e) and extension towers
//! GF(q) ⊂ GF(q^m).
//!
//! Elements of GF(p^e) are residue classes of Z_p[x] modulo a fixed monic
//! irreducible polynomial. An element with coordinates (c_0, ..., c_{e-1})
//! (constant term first) is encoded as the integer Σ c_i p^i, so the
//! encodings 0..p^e-1 enumerate the field. Multiplication runs through
//! exp/log tables built from a verified generator; addition is digitwise
//! (a full table is kept for small fields, XOR for characteristic 2).
//!
//! Moduli come from a shipped lookup table (one canonical polynomial per
//! (p, e)), with a deterministic search as fallback, so every run produces
//! bit-identical field elements.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::cosets::CosetProfile;

/// Largest admissible field size for `make_field`.
pub const DEFAULT_SIZE_CEILING: u64 = 1 << 20;

/// Fields up to this size keep a full addition table.
const ADD_TABLE_MAX: u64 = 1024;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {size} exceeds the configured ceiling {ceiling}")]
    SizeCeiling { size: u64, ceiling: u64 },
    #[error("no modulus table entry for (p={p}, e={e}) and search is disabled")]
    NoTableEntry { p: u64, e: u32 },
    #[error("modulus is not monic of degree e")]
    BadModulus,
    #[error("modulus is reducible over Z_p")]
    NotIrreducible,
    #[error("no multiplicative generator found")]
    NoGenerator,
    #[error("element belongs to a different field context")]
    ContextMismatch,
    #[error("coefficient out of range for Z_p")]
    InvalidCoeffs,
    #[error("element has no preimage in the base field")]
    NotInSubfield,
    #[error("order of the zero element is undefined")]
    ZeroElement,
    #[error("tower precondition failed: {0}")]
    TowerPrecondition(String),
    #[error("vector length does not match the tower")]
    LengthMismatch,
}

// ---------------------------------------------------------------------------
// integer helpers
// ---------------------------------------------------------------------------

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as (prime, multiplicity) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut m = 0;
            while n % d == 0 {
                n /= d;
                m += 1;
            }
            out.push((d, m));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Decompose q = p^e with p prime; None if q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factorize(q);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// All positive divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Multiplicative order of a modulo m (gcd(a, m) must be 1).
pub fn mul_order_mod(a: u64, m: u64) -> u64 {
    assert!(m > 0 && gcd(a % m, m) == 1, "order requires gcd(a, m) = 1");
    if m == 1 {
        return 1;
    }
    let mut t = 1u64;
    let mut x = a % m;
    while x != 1 {
        x = x * (a % m) % m;
        t += 1;
    }
    t
}

// ---------------------------------------------------------------------------
// bootstrap polynomial arithmetic over Z_p (used before tables exist)
// ---------------------------------------------------------------------------

fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    ptrim(&mut out);
    out
}

/// Remainder of a modulo the monic polynomial f.
fn pmod(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    ptrim(&mut r);
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        for i in 0..=df {
            let idx = shift + i;
            let sub = lead * f[i] % p;
            r[idx] = (r[idx] + p - sub % p) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    ptrim(&mut x);
    ptrim(&mut y);
    while !y.is_empty() {
        // make y monic before reducing
        let lead = *y.last().unwrap();
        if lead != 1 {
            let inv = mod_inverse(lead, p);
            for c in y.iter_mut() {
                *c = *c * inv % p;
            }
        }
        let r = pmod(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// x^(p^k) mod f, by repeated p-th powering.
fn x_qpow_mod(f: &[u64], p: u64, k: u32) -> Vec<u64> {
    let mut cur = vec![0, 1]; // x
    cur = pmod(&cur, f, p);
    for _ in 0..k {
        cur = ppow_mod(&cur, p, f, p);
    }
    cur
}

fn ppow_mod(a: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = pmod(a, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = pmod(&pmul(&acc, &base, p), f, p);
        }
        base = pmod(&pmul(&base, &base, p), f, p);
        exp >>= 1;
    }
    acc
}

/// Irreducibility over Z_p by trial gcd with x^(p^i) - x for i <= e/2.
pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let e = modulus.len() - 1;
    if e == 0 || modulus[e] != 1 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if modulus[0] == 0 {
        return false; // x divides
    }
    for i in 1..=(e / 2) {
        // gcd(f, x^(p^i) - x) collects all factors of degree dividing i
        let xq = x_qpow_mod(modulus, p, i as u32);
        let mut diff = xq;
        // subtract x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        ptrim(&mut diff);
        let g = pgcd(modulus, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Order of the class of x modulo f equals p^e - 1 (f must be irreducible).
fn x_is_primitive(f: &[u64], p: u64) -> bool {
    let e = (f.len() - 1) as u32;
    let size = p.pow(e);
    let group = size - 1;
    if group == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    if ppow_mod(&x, group, f, p) != vec![1] {
        return false;
    }
    for (l, _) in factorize(group) {
        if ppow_mod(&x, group / l, f, p) == vec![1] {
            return false;
        }
    }
    true
}

/// Deterministic canonical modulus search: the first monic degree-e
/// polynomial, in sign-adjusted lexicographic order, that is irreducible and
/// has x as a multiplicative generator. The order compares the words
/// b_i = (-1)^(e-i) a_i (mod p), most significant coefficient first, which
/// reproduces the conventional small-field choices (e.g. x^2 - x - 1 for
/// GF(9)).
pub fn canonical_modulus_search(p: u64, e: u32) -> Option<Vec<u64>> {
    if !is_prime(p) || e == 0 {
        return None;
    }
    let count = p.checked_pow(e)?;
    for w in 0..count {
        // digits of w, b_{e-1} most significant
        let mut f = vec![0u64; e as usize + 1];
        f[e as usize] = 1;
        let mut rest = w;
        for i in 0..e as usize {
            // i = 0 is the least significant word digit, which is b_0 (the
            // constant-term word); words are compared most significant first,
            // so b_{e-1} must be the slowest-moving digit.
            let b = rest % p;
            rest /= p;
            let ai = if (e as usize - i) % 2 == 0 { b } else { (p - b) % p };
            f[i] = ai;
        }
        if f[0] == 0 && e > 0 {
            continue;
        }
        if is_irreducible(&f, p) && x_is_primitive(&f, p) {
            return Some(f);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// modulus table
// ---------------------------------------------------------------------------

/// Lookup table of canonical moduli, one per (p, e). Lines are
/// `p e c0 c1 ... ce` with the constant coefficient first; `#` starts a
/// comment.
pub struct ModulusTable {
    entries: HashMap<(u64, u32), Vec<u64>>,
    pub allow_search: bool,
}

const SHIPPED_TABLE: &str = include_str!("../resources/modulus_table.txt");

impl ModulusTable {
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let mut entries = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| FieldError::BadModulus))
                .collect::<Result<_, _>>()?;
            if nums.len() < 3 {
                return Err(FieldError::BadModulus);
            }
            let p = nums[0];
            let e = nums[1] as u32;
            let coeffs = nums[2..].to_vec();
            if coeffs.len() != e as usize + 1 {
                return Err(FieldError::BadModulus);
            }
            entries.insert((p, e), coeffs);
        }
        Ok(ModulusTable { entries, allow_search: true })
    }

    pub fn shipped() -> &'static ModulusTable {
        use std::sync::OnceLock;
        static TABLE: OnceLock<ModulusTable> = OnceLock::new();
        TABLE.get_or_init(|| ModulusTable::parse(SHIPPED_TABLE).expect("shipped modulus table is well-formed"))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, FieldError> {
        let text = std::fs::read_to_string(path).map_err(|_| FieldError::BadModulus)?;
        ModulusTable::parse(&text)
    }

    pub fn get(&self, p: u64, e: u32) -> Option<&Vec<u64>> {
        self.entries.get(&(p, e))
    }

    pub fn get_or_search(&self, p: u64, e: u32) -> Result<Vec<u64>, FieldError> {
        if let Some(m) = self.get(p, e) {
            return Ok(m.clone());
        }
        if !self.allow_search {
            return Err(FieldError::NoTableEntry { p, e });
        }
        canonical_modulus_search(p, e).ok_or(FieldError::NoGenerator)
    }
}

// ---------------------------------------------------------------------------
// field context
// ---------------------------------------------------------------------------

static NEXT_CTX_ID: AtomicU64 = AtomicU64::new(1);

/// An element of some GF(p^e), tagged with its context id. Arithmetic goes
/// through [`FieldCtx`] methods; mixing contexts is a hard error.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    pub(crate) ctx: u64,
    pub(crate) enc: u32,
}

impl FieldElement {
    /// Integer encoding Σ c_i p^i of the coordinate vector.
    pub fn enc(self) -> u32 {
        self.enc
    }
    pub fn is_zero(self) -> bool {
        self.enc == 0
    }
}

/// Context for GF(p^e): modulus, verified generator, and operation tables.
pub struct FieldCtx {
    id: u64,
    p: u64,
    e: u32,
    size: u64,
    modulus: Vec<u64>,
    generator: u32,
    exp: Vec<u32>,          // length 2*(size-1); exp[i] = g^i
    log: Vec<u32>,          // log[0] unused
    neg: Vec<u32>,
    add_tab: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})#{}", self.p, self.e, self.id)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id || (self.p == other.p && self.e == other.e && self.modulus == other.modulus)
    }
}

/// Build GF(p^e) with the shipped modulus table (search fallback enabled).
pub fn make_field(p: u64, e: u32) -> Result<Arc<FieldCtx>, FieldError> {
    make_field_with(ModulusTable::shipped(), p, e, DEFAULT_SIZE_CEILING)
}

pub fn make_field_with(
    table: &ModulusTable,
    p: u64,
    e: u32,
    ceiling: u64,
) -> Result<Arc<FieldCtx>, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 {
        return Err(FieldError::BadModulus);
    }
    let size = (p as u128).checked_pow(e).filter(|&s| s <= ceiling as u128).ok_or(
        FieldError::SizeCeiling { size: 0, ceiling },
    )? as u64;
    let _ = size;
    let modulus = table.get_or_search(p, e)?;
    FieldCtx::from_modulus(p, e, modulus)
}

impl FieldCtx {
    /// Verify the modulus, locate a generator (the class of x when primitive,
    /// otherwise the smallest-encoded element of full order), and build the
    /// exp/log/add tables.
    pub fn from_modulus(p: u64, e: u32, modulus: Vec<u64>) -> Result<Arc<FieldCtx>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 {
            return Err(FieldError::BadModulus);
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus);
        }
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::NotIrreducible);
        }
        let size = p.pow(e);
        let mut ctx = FieldCtx {
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            p,
            e,
            size,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_tab: None,
        };
        let generator = ctx.find_generator()?;
        ctx.generator = generator;
        ctx.build_tables();
        Ok(Arc::new(ctx))
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        // digit-level multiply mod the modulus; only used to build tables
        let pa = self.dec_poly(a);
        let pb = self.dec_poly(b);
        let prod = pmod(&pmul(&pa, &pb, self.p), &self.modulus, self.p);
        self.enc_poly(&prod)
    }

    fn dec_poly(&self, a: u32) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut t = a as u64;
        for _ in 0..self.e {
            v.push(t % self.p);
            t /= self.p;
        }
        let mut v = v;
        ptrim(&mut v);
        v
    }

    fn enc_poly(&self, v: &[u64]) -> u32 {
        let mut acc = 0u64;
        for &c in v.iter().rev() {
            acc = acc * self.p + c;
        }
        acc as u32
    }

    fn raw_order(&self, a: u32) -> u64 {
        let group = self.size - 1;
        let mut t = 1u64;
        let mut x = a;
        while x != 1 {
            x = self.raw_mul(x, a);
            t += 1;
            assert!(t <= group, "order exceeded group size");
        }
        t
    }

    fn find_generator(&self) -> Result<u32, FieldError> {
        let group = self.size - 1;
        if group == 1 {
            return Ok(1);
        }
        let x_enc = if self.e == 1 {
            // class of x reduces to the constant -modulus[0]
            ((self.p - self.modulus[0] % self.p) % self.p) as u32
        } else {
            self.p as u32
        };
        if x_enc != 0 && self.raw_order(x_enc) == group {
            return Ok(x_enc);
        }
        for cand in 2..self.size {
            if self.raw_order(cand as u32) == group {
                return Ok(cand as u32);
            }
        }
        Err(FieldError::NoGenerator)
    }

    fn build_tables(&mut self) {
        let group = (self.size - 1) as usize;
        let mut exp = vec![0u32; group.max(1) * 2];
        let mut log = vec![0u32; self.size as usize];
        let mut cur = 1u32;
        for i in 0..group {
            exp[i] = cur;
            exp[i + group] = cur;
            log[cur as usize] = i as u32;
            cur = self.raw_mul(cur, self.generator);
        }
        debug_assert_eq!(cur, 1, "generator order mismatch");
        self.exp = exp;
        self.log = log;
        let mut neg = vec![0u32; self.size as usize];
        for a in 0..self.size {
            let pa = self.dec_poly(a as u32);
            let mut np = pa;
            for c in np.iter_mut() {
                *c = (self.p - *c) % self.p;
            }
            neg[a as usize] = self.enc_poly(&np);
        }
        self.neg = neg;
        if self.p != 2 && self.size <= ADD_TABLE_MAX {
            let s = self.size as usize;
            let mut tab = vec![0u32; s * s];
            for a in 0..s {
                let pa = self.dec_poly(a as u32);
                for b in a..s {
                    let pb = self.dec_poly(b as u32);
                    let mut sum = vec![0u64; self.e as usize];
                    for i in 0..self.e as usize {
                        let ca = pa.get(i).copied().unwrap_or(0);
                        let cb = pb.get(i).copied().unwrap_or(0);
                        sum[i] = (ca + cb) % self.p;
                    }
                    let enc = self.enc_poly(&sum);
                    tab[a * s + b] = enc;
                    tab[b * s + a] = enc;
                }
            }
            self.add_tab = Some(tab);
        }
    }

    // -- accessors ---------------------------------------------------------

    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn characteristic(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.e
    }
    pub fn size(&self) -> u64 {
        self.size
    }
    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn generator(&self) -> FieldElement {
        self.el(self.generator)
    }

    pub fn same_field(&self, other: &FieldCtx) -> bool {
        self == other
    }

    // -- element constructors ------------------------------------------------

    pub fn zero(&self) -> FieldElement {
        self.el(0)
    }
    pub fn one(&self) -> FieldElement {
        self.el(1)
    }
    /// Element from its integer encoding.
    pub fn el(&self, enc: u32) -> FieldElement {
        assert!((enc as u64) < self.size, "encoding out of range");
        FieldElement { ctx: self.id, enc }
    }
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::InvalidCoeffs);
        }
        Ok(self.el(self.enc_poly(coeffs)))
    }
    /// Coordinates of a, constant term first, padded to length e.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        self.check(a);
        let mut v = self.dec_poly(a.enc);
        v.resize(self.e as usize, 0);
        v
    }
    pub fn all_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size).map(move |i| self.el(i as u32))
    }

    #[inline]
    fn check(&self, a: FieldElement) {
        assert!(
            a.ctx == self.id,
            "cross-context field arithmetic: element #{} used with {:?}",
            a.ctx,
            self
        );
    }

    // -- raw-encoding operations (crate-internal hot path) ------------------

    #[inline]
    pub(crate) fn add_enc(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if let Some(tab) = &self.add_tab {
            return tab[a as usize * self.size as usize + b as usize];
        }
        let mut acc = 0u64;
        let mut pw = 1u64;
        let (mut x, mut y) = (a as u64, b as u64);
        for _ in 0..self.e {
            let s = (x % self.p + y % self.p) % self.p;
            acc += s * pw;
            pw *= self.p;
            x /= self.p;
            y /= self.p;
        }
        acc as u32
    }

    #[inline]
    pub(crate) fn neg_enc(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub(crate) fn sub_enc(&self, a: u32, b: u32) -> u32 {
        self.add_enc(a, self.neg_enc(b))
    }

    #[inline]
    pub(crate) fn mul_enc(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        // log values are < size - 1 and exp is doubled, so no reduction needed
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    #[inline]
    pub(crate) fn inv_enc(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let g = (self.size - 1) as usize;
        if g == 1 {
            return 1;
        }
        self.exp[(g - self.log[a as usize] as usize) % g]
    }

    #[inline]
    pub(crate) fn pow_enc(&self, a: u32, k: u64) -> u32 {
        let g = self.size - 1;
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let l = self.log[a as usize] as u64;
        self.exp[((l % g) * (k % g) % g) as usize]
    }

    // -- public element operations -------------------------------------------

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.el(self.add_enc(a.enc, b.enc))
    }
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.el(self.sub_enc(a.enc, b.enc))
    }
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        self.el(self.neg_enc(a.enc))
    }
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.el(self.mul_enc(a.enc, b.enc))
    }
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a);
        if a.enc == 0 {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.el(self.inv_enc(a.enc)))
    }
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }
    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        self.check(a);
        self.el(self.pow_enc(a.enc, k))
    }

    /// Least t >= 1 with a^t = 1; divides p^e - 1.
    pub fn element_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        self.check(a);
        if a.enc == 0 {
            return Err(FieldError::ZeroElement);
        }
        let g = self.size - 1;
        if g == 0 {
            return Err(FieldError::ZeroElement);
        }
        if a.enc == 1 {
            return Ok(1);
        }
        Ok(g / gcd(g, self.log[a.enc as usize] as u64))
    }

    /// Discrete log with respect to the canonical generator.
    pub fn dlog(&self, a: FieldElement) -> Result<u64, FieldError> {
        self.check(a);
        if a.enc == 0 {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.log[a.enc as usize] as u64)
    }

    /// Check g^(p^e-1) = 1 and g^((p^e-1)/l) != 1 for every prime l.
    pub fn verify_generator(&self) -> bool {
        let g = self.size - 1;
        if g == 1 {
            return self.generator == 1;
        }
        if self.pow_enc(self.generator, g) != 1 {
            return false;
        }
        factorize(g).iter().all(|&(l, _)| self.pow_enc(self.generator, g / l) != 1)
    }
}

// ---------------------------------------------------------------------------
// extension towers
// ---------------------------------------------------------------------------

/// The pair GF(q) ⊂ GF(q^m) serving one (q, r, n) profile: m = ord_rn(q),
/// β a primitive rn-th root of unity in GF(q^m), α = β^n pulled back to
/// GF(q) (an element of order r), and the power basis {1, G, ..., G^(m-1)}
/// of the extension generator used for base-field expansion.
pub struct ExtensionTower {
    base: Arc<FieldCtx>,
    ext: Arc<FieldCtx>,
    m: u32,
    q: u64,
    r: u64,
    n: u64,
    rn: u64,
    beta: u32,
    alpha: u32,
    embed_tab: Vec<u32>,
    unembed_tab: HashMap<u32, u32>,
    basis_pows: Vec<u32>,
    // inverse of the F_p-linear map GF(q)^m -> GF(q^m) over the power basis;
    // row-major (e*m) x (e*m) over Z_p
    expand_inv: Vec<u64>,
}

impl ExtensionTower {
    /// Construct the tower for a coset profile: gcd(n, q) = 1 and r | q-1.
    pub fn build(profile: &CosetProfile) -> Result<Arc<ExtensionTower>, FieldError> {
        Self::build_for(profile.q, profile.r, profile.n)
    }

    pub fn build_for(q: u64, r: u64, n: u64) -> Result<Arc<ExtensionTower>, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        if n == 0 || gcd(n, q) != 1 {
            return Err(FieldError::TowerPrecondition(format!(
                "gcd(n, q) must be 1 (n = {n}, q = {q})"
            )));
        }
        if r == 0 || (q - 1) % r != 0 {
            return Err(FieldError::TowerPrecondition(format!(
                "r must divide q - 1 (r = {r}, q = {q})"
            )));
        }
        let rn = r * n;
        let m = mul_order_mod(q % rn.max(1), rn) as u32;
        let base = make_field(p, e)?;
        let ext = if m == 1 { base.clone() } else { make_field(p, e * m)? };
        debug_assert_eq!((ext.size() - 1) % rn, 0);

        // embed: send the class of x in the base modulus to its first root
        // (in encoding order) inside the extension.
        let root = if m == 1 {
            base.el(if e == 1 {
                ((p - base.modulus[0] % p) % p) as u32
            } else {
                p as u32
            })
        } else {
            let mut found = None;
            for cand in ext.all_elements() {
                // evaluate the base modulus at cand
                let mut acc = ext.zero();
                for &c in base.modulus().iter().rev() {
                    acc = ext.mul(acc, cand);
                    acc = ext.add(acc, ext.el(c as u32));
                }
                if acc.is_zero() {
                    found = Some(cand);
                    break;
                }
            }
            found.ok_or_else(|| {
                FieldError::TowerPrecondition("base modulus has no root in the extension".into())
            })?
        };

        let mut embed_tab = vec![0u32; base.size() as usize];
        let mut unembed_tab = HashMap::with_capacity(base.size() as usize);
        for a in 0..base.size() as u32 {
            let coords = base.dec_poly(a);
            let mut acc = ext.zero();
            for &c in coords.iter().rev() {
                acc = ext.mul(acc, root);
                acc = ext.add(acc, ext.el(c as u32));
            }
            embed_tab[a as usize] = acc.enc;
            unembed_tab.insert(acc.enc, a);
        }

        let beta = ext.pow(ext.generator(), (ext.size() - 1) / rn);
        let alpha_ext = ext.pow(beta, n);
        let alpha = *unembed_tab
            .get(&alpha_ext.enc)
            .ok_or(FieldError::NotInSubfield)?;
        // β has order exactly rn because the generator is verified; α = β^n
        // must have order exactly r.
        let alpha_el = base.el(alpha);
        if base.element_order(alpha_el)? != r {
            return Err(FieldError::TowerPrecondition(format!(
                "alpha = beta^n has order {} != r = {}",
                base.element_order(alpha_el)?,
                r
            )));
        }

        // power basis of the extension generator and the inverse expansion map
        let em = (e * m) as usize;
        let mut basis_pows = Vec::with_capacity(m as usize);
        let gext = ext.generator();
        let mut acc = ext.one();
        for _ in 0..m {
            basis_pows.push(acc.enc);
            acc = ext.mul(acc, gext);
        }
        // columns of M: phi(unit_{j,i}) = embed(x^i) * G^j
        let mut mat = vec![0u64; em * em];
        for j in 0..m as usize {
            for i in 0..e as usize {
                let unit = base.el(p.pow(i as u32) as u32);
                let v = ext.mul_enc(embed_tab[unit.enc as usize], basis_pows[j]);
                let digits = ext.dec_poly(v);
                let col = j * e as usize + i;
                for (row, &d) in digits.iter().enumerate() {
                    mat[row * em + col] = d;
                }
            }
        }
        let expand_inv = invert_zp_matrix(&mat, em, p).ok_or_else(|| {
            FieldError::TowerPrecondition("power basis is not a basis over the base field".into())
        })?;

        Ok(Arc::new(ExtensionTower {
            base,
            ext,
            m,
            q,
            r,
            n,
            rn,
            beta: beta.enc,
            alpha,
            embed_tab,
            unembed_tab,
            basis_pows,
            expand_inv,
        }))
    }

    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }
    pub fn ext(&self) -> &Arc<FieldCtx> {
        &self.ext
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn rn(&self) -> u64 {
        self.rn
    }
    /// Primitive rn-th root of unity β = g^((q^m - 1)/rn).
    pub fn beta(&self) -> FieldElement {
        self.ext.el(self.beta)
    }
    /// Element of order r in GF(q) with embed(α) = β^n.
    pub fn alpha(&self) -> FieldElement {
        self.base.el(self.alpha)
    }
    /// Primitive n-th root ξ = β^r.
    pub fn xi(&self) -> FieldElement {
        self.beta_pow(self.r)
    }
    pub fn beta_pow(&self, k: u64) -> FieldElement {
        self.ext.el(self.ext.pow_enc(self.beta, k % self.rn))
    }

    pub fn embed(&self, a: FieldElement) -> FieldElement {
        self.base.check(a);
        self.ext.el(self.embed_tab[a.enc as usize])
    }
    pub(crate) fn embed_enc(&self, a: u32) -> u32 {
        self.embed_tab[a as usize]
    }
    pub fn try_unembed(&self, y: FieldElement) -> Option<FieldElement> {
        self.ext.check(y);
        self.unembed_tab.get(&y.enc).map(|&a| self.base.el(a))
    }
    pub(crate) fn unembed_enc(&self, y: u32) -> Option<u32> {
        self.unembed_tab.get(&y).copied()
    }

    /// Coordinates of y over the power basis: y = Σ_j embed(out[j]) G^j.
    pub fn expand_elem(&self, y: FieldElement) -> Vec<FieldElement> {
        self.ext.check(y);
        self.expand_elem_enc(y.enc)
            .into_iter()
            .map(|enc| self.base.el(enc))
            .collect()
    }

    pub(crate) fn expand_elem_enc(&self, y: u32) -> Vec<u32> {
        let e = self.base.e as usize;
        let em = e * self.m as usize;
        let mut digits = self.ext.dec_poly(y);
        digits.resize(em, 0);
        let p = self.base.p;
        let mut out = Vec::with_capacity(self.m as usize);
        for j in 0..self.m as usize {
            let mut coord = vec![0u64; e];
            for (i, c) in coord.iter_mut().enumerate() {
                let row = j * e + i;
                let mut acc = 0u64;
                for (col, &d) in digits.iter().enumerate() {
                    acc += self.expand_inv[row * em + col] * d;
                }
                *c = acc % p;
            }
            out.push(self.base.enc_poly(&coord));
        }
        out
    }

    /// Expand a vector over GF(q^m) into m vectors over GF(q): component i of
    /// output j is the j-th power-basis coordinate of v_i. A base-field
    /// vector w satisfies w·v = 0 in the extension iff w·u = 0 for every
    /// returned u.
    pub fn expand_over_base(&self, v: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>, FieldError> {
        for &y in v {
            if y.ctx != self.ext.id {
                return Err(FieldError::ContextMismatch);
            }
        }
        let mut rows: Vec<Vec<FieldElement>> =
            (0..self.m).map(|_| Vec::with_capacity(v.len())).collect();
        for &y in v {
            for (j, c) in self.expand_elem(y).into_iter().enumerate() {
                rows[j].push(c);
            }
        }
        Ok(rows)
    }

    /// Rebuild the extension vector from its expansion (test support).
    pub fn reassemble(&self, rows: &[Vec<FieldElement>]) -> Result<Vec<FieldElement>, FieldError> {
        if rows.len() != self.m as usize {
            return Err(FieldError::LengthMismatch);
        }
        let len = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != len) {
            return Err(FieldError::LengthMismatch);
        }
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let mut acc = self.ext.zero();
            for (j, row) in rows.iter().enumerate() {
                let term = self.ext.mul(self.embed(row[i]), self.ext.el(self.basis_pows[j]));
                acc = self.ext.add(acc, term);
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Inverse of a square matrix over Z_p (row-major); None when singular.
fn invert_zp_matrix(mat: &[u64], dim: usize, p: u64) -> Option<Vec<u64>> {
    let mut a = mat.to_vec();
    let mut inv = vec![0u64; dim * dim];
    for i in 0..dim {
        inv[i * dim + i] = 1;
    }
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| a[r * dim + col] != 0)?;
        if pivot != col {
            for j in 0..dim {
                a.swap(col * dim + j, pivot * dim + j);
                inv.swap(col * dim + j, pivot * dim + j);
            }
        }
        let pv = a[col * dim + col];
        let pv_inv = mod_inverse(pv, p);
        for j in 0..dim {
            a[col * dim + j] = a[col * dim + j] * pv_inv % p;
            inv[col * dim + j] = inv[col * dim + j] * pv_inv % p;
        }
        for r in 0..dim {
            if r == col || a[r * dim + col] == 0 {
                continue;
            }
            let f = a[r * dim + col];
            for j in 0..dim {
                let sub_a = f * a[col * dim + j] % p;
                a[r * dim + j] = (a[r * dim + j] + p - sub_a) % p;
                let sub_i = f * inv[col * dim + j] % p;
                inv[r * dim + j] = (inv[r * dim + j] + p - sub_i) % p;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_gf3() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.size(), 3);
        assert_eq!(f.generator().enc(), 2);
        assert_eq!(f.element_order(f.el(2)).unwrap(), 2);
        assert_eq!(f.element_order(f.one()).unwrap(), 1);
        assert!(f.element_order(f.zero()).is_err());
    }

    #[test]
    fn gf9_canonical_modulus_is_x2_minus_x_minus_1() {
        let f = make_field(3, 2).unwrap();
        // x^2 - x - 1 = x^2 + 2x + 2 over Z_3
        assert_eq!(f.modulus(), &[2, 2, 1]);
        assert_eq!(f.generator().enc(), 3, "generator is the class of x");
        assert_eq!(f.element_order(f.generator()).unwrap(), 8);
    }

    #[test]
    fn gf16_generator_order_15() {
        let f = make_field(2, 4).unwrap();
        assert_eq!(f.size(), 16);
        let g = f.generator();
        assert_eq!(f.element_order(g).unwrap(), 15);
        for l in [3u64, 5] {
            assert_ne!(f.pow(g, 15 / l), f.one());
        }
        assert!(f.verify_generator());
    }

    #[test]
    fn make_field_rejects_non_prime() {
        assert!(matches!(make_field(6, 1), Err(FieldError::NotPrime(6))));
    }

    #[test]
    fn field_axioms_random_sample() {
        let ctxs = [
            make_field(3, 1).unwrap(),
            make_field(3, 2).unwrap(),
            make_field(2, 4).unwrap(),
            make_field(29, 1).unwrap(),
            make_field(3, 4).unwrap(),
            make_field(5, 2).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in &ctxs {
            for _ in 0..10_000 {
                let a = f.el(rng.gen_range(0..f.size()) as u32);
                let b = f.el(rng.gen_range(0..f.size()) as u32);
                let c = f.el(rng.gen_range(0..f.size()) as u32);
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.add(a, f.neg(a)), f.zero());
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [make_field(3, 2).unwrap(), make_field(2, 6).unwrap(), make_field(5, 2).unwrap()] {
            let p = f.characteristic();
            for _ in 0..2_000 {
                let a = f.el(rng.gen_range(0..f.size()) as u32);
                let b = f.el(rng.gen_range(0..f.size()) as u32);
                assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
            }
        }
    }

    #[test]
    fn tower_gf9_over_gf3() {
        // q = 3, r = 2, n = 4: m = 2, beta of order 8 in GF(9), alpha = -1
        let t = ExtensionTower::build_for(3, 2, 4).unwrap();
        assert_eq!(t.m(), 2);
        assert_eq!(t.ext().size(), 9);
        assert_eq!(t.ext().element_order(t.beta()).unwrap(), 8);
        assert_eq!(t.alpha().enc(), 2, "alpha = -1 in GF(3)");
        assert_eq!(t.base().element_order(t.alpha()).unwrap(), 2);
        // xi = beta^r has order n
        assert_eq!(t.ext().element_order(t.xi()).unwrap(), 4);
    }

    #[test]
    fn tower_gf81_over_gf9() {
        // q = 9, r = 4, n = 10: m = 2, beta of order 40 in GF(81)
        let t = ExtensionTower::build_for(9, 4, 10).unwrap();
        assert_eq!(t.m(), 2);
        assert_eq!(t.ext().size(), 81);
        assert_eq!(t.ext().element_order(t.beta()).unwrap(), 40);
        assert_eq!(t.base().element_order(t.alpha()).unwrap(), 4);
    }

    #[test]
    fn tower_trivial_extension() {
        // q = 8, r = 1, n = 7: rn = q - 1 forces m = 1
        let t = ExtensionTower::build_for(8, 1, 7).unwrap();
        assert_eq!(t.m(), 1);
        assert_eq!(t.ext().size(), 8);
        assert_eq!(t.ext().element_order(t.beta()).unwrap(), 7);
        assert_eq!(t.alpha(), t.base().one());
    }

    #[test]
    fn beta_order_is_exactly_rn() {
        for (q, r, n) in [(3, 2, 4), (9, 4, 10), (8, 1, 7), (16, 3, 17), (25, 6, 26), (29, 7, 15)] {
            let t = ExtensionTower::build_for(q, r, n).unwrap();
            let ext = t.ext();
            let rn = t.rn();
            assert_eq!(ext.pow(t.beta(), rn), ext.one());
            for (l, _) in factorize(rn) {
                assert_ne!(ext.pow(t.beta(), rn / l), ext.one(), "beta^({rn}/{l}) = 1");
            }
        }
    }

    #[test]
    fn embed_is_field_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (q, r, n) in [(3, 2, 4), (9, 4, 10), (16, 3, 17)] {
            let t = ExtensionTower::build_for(q, r, n).unwrap();
            let (base, ext) = (t.base(), t.ext());
            for _ in 0..2_000 {
                let a = base.el(rng.gen_range(0..base.size()) as u32);
                let b = base.el(rng.gen_range(0..base.size()) as u32);
                assert_eq!(t.embed(base.mul(a, b)), ext.mul(t.embed(a), t.embed(b)));
                assert_eq!(t.embed(base.add(a, b)), ext.add(t.embed(a), t.embed(b)));
            }
            assert_eq!(t.embed(base.one()), ext.one());
        }
    }

    #[test]
    fn expansion_examples_gf9() {
        // tower GF(3) -> GF(9), basis {1, w}, w^2 = w + 1
        let t = ExtensionTower::build_for(3, 2, 4).unwrap();
        let ext = t.ext();
        let w = ext.generator();
        let w3 = ext.pow(w, 3);
        // w^3 = 1 + 2w
        assert_eq!(ext.coeffs(w3), vec![1, 2]);
        let rows = t.expand_over_base(&[w, w3]).unwrap();
        let b = t.base();
        assert_eq!(rows[0], vec![b.el(0), b.el(1)]);
        assert_eq!(rows[1], vec![b.el(1), b.el(2)]);
    }

    #[test]
    fn expansion_trivial_cases() {
        let t = ExtensionTower::build_for(9, 4, 10).unwrap();
        let ext = t.ext();
        let zeros = vec![ext.zero(); 5];
        let rows = t.expand_over_base(&zeros).unwrap();
        for row in &rows {
            assert!(row.iter().all(|c| c.is_zero()));
        }
        let ones = vec![ext.one(); 5];
        let rows = t.expand_over_base(&ones).unwrap();
        assert!(rows[0].iter().all(|c| *c == t.base().one()));
        assert!(rows[1].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn expansion_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for (q, r, n) in [(3, 2, 4), (9, 4, 10), (8, 7, 9), (13, 4, 14)] {
            let t = ExtensionTower::build_for(q, r, n).unwrap();
            let ext = t.ext();
            for _ in 0..200 {
                let v: Vec<_> = (0..n)
                    .map(|_| ext.el(rng.gen_range(0..ext.size()) as u32))
                    .collect();
                let rows = t.expand_over_base(&v).unwrap();
                assert_eq!(t.reassemble(&rows).unwrap(), v);
            }
        }
    }

    #[test]
    fn expansion_orthogonality_equivalence() {
        // w . v = 0 over the extension iff w . u_j = 0 for every expansion row
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for (q, r, n) in [(3, 2, 4), (9, 4, 10), (8, 7, 9)] {
            let t = ExtensionTower::build_for(q, r, n).unwrap();
            let (base, ext) = (t.base().clone(), t.ext().clone());
            for _ in 0..1_000 {
                let v: Vec<_> = (0..n)
                    .map(|_| ext.el(rng.gen_range(0..ext.size()) as u32))
                    .collect();
                let w: Vec<_> = (0..n)
                    .map(|_| base.el(rng.gen_range(0..base.size()) as u32))
                    .collect();
                let mut dot = ext.zero();
                for i in 0..n as usize {
                    dot = ext.add(dot, ext.mul(t.embed(w[i]), v[i]));
                }
                let rows = t.expand_over_base(&v).unwrap();
                let all_zero = rows.iter().all(|u| {
                    let mut s = base.zero();
                    for i in 0..n as usize {
                        s = base.add(s, base.mul(w[i], u[i]));
                    }
                    s.is_zero()
                });
                assert_eq!(dot.is_zero(), all_zero);
            }
        }
    }

    #[test]
    fn cross_context_arithmetic_is_rejected() {
        let f3 = make_field(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        let a = f3.el(1);
        let b = f9.el(1);
        let result = std::panic::catch_unwind(|| f3.add(a, b));
        assert!(result.is_err());
    }

    #[test]
    fn shipped_table_matches_search_rule() {
        // every shipped entry must be reproducible by the deterministic search
        let table = ModulusTable::shipped();
        for (&(p, e), coeffs) in table.entries.iter() {
            if p.pow(e) > 4096 {
                continue; // spot-check the small entries; larger ones are verified primitive below
            }
            let found = canonical_modulus_search(p, e).unwrap();
            assert_eq!(&found, coeffs, "entry ({p},{e})");
        }
        for (&(p, e), coeffs) in table.entries.iter() {
            assert!(is_irreducible(coeffs, p), "({p},{e}) irreducible");
            assert!(x_is_primitive(coeffs, p), "({p},{e}) primitive");
        }
    }
}
