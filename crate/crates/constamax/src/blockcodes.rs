//! α-constacyclic BCH codes over GF(q): minimal polynomials, generator
//! polynomials from coset-closed defining sets, parity-check matrices by
//! base-field expansion, duals, and the named block-code families.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cosets::{longest_run, orbit, CongruenceClass, CosetError, CosetProfile};
use crate::field::{ExtensionTower, FieldCtx, FieldElement, FieldError};
use crate::matrix::MatrixQ;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error("defining set is not closed under the q-orbit (element {0})")]
    NotCosetClosed(u64),
    #[error("residue {0} lies outside O_rn")]
    OutsideOrn(u64),
    #[error("generator does not divide x^n - alpha")]
    GeneratorDivision,
    #[error("minimal polynomial coefficient not in the base field (broken tower)")]
    CoefficientNotInBase,
    #[error("vector length {got} does not match code length {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("defining set has no run realizing the designed distance")]
    RunTooShort,
    #[error("parity-check rank {got} != n - k = {want}")]
    RankMismatch { got: usize, want: usize },
    #[error("family precondition failed: {0}")]
    FamilyPrecondition(String),
    #[error("index out of the family's admissible range: {0}")]
    IndexRange(String),
}

// ---------------------------------------------------------------------------
// polynomials over GF(q)
// ---------------------------------------------------------------------------

/// Dense polynomial over one GF(q) context, constant term first, no trailing
/// zeros (the zero polynomial has an empty coefficient list).
#[derive(Clone, PartialEq)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<u32>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly {
    pub fn zero(ctx: Arc<FieldCtx>) -> Poly {
        Poly { ctx, coeffs: Vec::new() }
    }

    pub fn one(ctx: Arc<FieldCtx>) -> Poly {
        Poly { ctx, coeffs: vec![1] }
    }

    pub fn from_enc(ctx: Arc<FieldCtx>, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        for &c in &coeffs {
            assert!((c as u64) < ctx.size(), "encoding out of range");
        }
        Poly { ctx, coeffs }
    }

    /// x^n - c.
    pub fn x_pow_minus(ctx: Arc<FieldCtx>, n: usize, c: u32) -> Poly {
        let mut coeffs = vec![0u32; n + 1];
        coeffs[0] = ctx.neg_enc(c);
        coeffs[n] = 1;
        Poly::from_enc(ctx, coeffs)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert!(self.ctx.same_field(&other.ctx));
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u32; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.ctx.add_enc(self.coeff(i), other.coeff(i));
        }
        Poly::from_enc(self.ctx.clone(), out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert!(self.ctx.same_field(&other.ctx));
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ctx.clone());
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.ctx.add_enc(out[i + j], self.ctx.mul_enc(a, b));
            }
        }
        Poly::from_enc(self.ctx.clone(), out)
    }

    /// Quotient and remainder; divisor must be nonzero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(self.ctx.same_field(&divisor.ctx));
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let ctx = &self.ctx;
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = ctx.inv_enc(*divisor.coeffs.last().unwrap());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(self.ctx.clone()), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let f = ctx.mul_enc(c, lead_inv);
            quot[i - dd] = f;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = ctx.sub_enc(rem[i - dd + j], ctx.mul_enc(f, dc));
            }
        }
        (Poly::from_enc(self.ctx.clone(), quot), Poly::from_enc(self.ctx.clone(), rem))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.divrem(self).1.is_zero()
    }

    /// Evaluate at a raw encoding of the same context (Horner).
    pub fn eval_enc(&self, x: u32) -> u32 {
        let mut acc = 0u32;
        for &c in self.coeffs.iter().rev() {
            acc = self.ctx.add_enc(self.ctx.mul_enc(acc, x), c);
        }
        acc
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.ctx.el(self.eval_enc(x.enc()))
    }
}

// ---------------------------------------------------------------------------
// minimal polynomials and codes
// ---------------------------------------------------------------------------

/// Minimal polynomial of β^j over GF(q): the product of (x - β^e) over the
/// q-orbit of j mod rn, with coefficients pulled back to the base field.
pub fn minimal_poly(j: u64, tower: &ExtensionTower) -> Result<Poly, CodeError> {
    let profile = CosetProfile::new(tower.q(), tower.r(), tower.n())?;
    let coset = orbit(j, &profile);
    let ext = tower.ext();
    // product over the orbit, computed in the extension
    let mut coeffs: Vec<u32> = vec![1];
    for &e in &coset.elements {
        let root = tower.beta_pow(e).enc();
        let mut next = vec![0u32; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] = ext.add_enc(next[i + 1], c);
            next[i] = ext.sub_enc(next[i], ext.mul_enc(c, root));
        }
        coeffs = next;
    }
    let base_coeffs: Option<Vec<u32>> = coeffs.iter().map(|&c| tower.unembed_enc(c)).collect();
    let base_coeffs = base_coeffs.ok_or(CodeError::CoefficientNotInBase)?;
    Ok(Poly::from_enc(tower.base().clone(), base_coeffs))
}

/// Theorem-family labels; `Custom` for direct defining-set constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyTag {
    Custom,
    MainclasI { i: u64 },
    MainclasII { i: u64 },
    MainclasIII { i: u64 },
    MainclasIIIA { i: u64 },
    MainclasIIIB { i: u64 },
    MainclasIV,
    MainclasIVAa,
    MainclasIVAb,
    MainclasV,
}

impl FamilyTag {
    pub fn name(&self) -> String {
        match self {
            FamilyTag::Custom => "custom".into(),
            FamilyTag::MainclasI { i } => format!("mainclasI(i={i})"),
            FamilyTag::MainclasII { i } => format!("mainclasII(i={i})"),
            FamilyTag::MainclasIII { i } => format!("mainclasIII(i={i})"),
            FamilyTag::MainclasIIIA { i } => format!("mainclasIIIA(i={i})"),
            FamilyTag::MainclasIIIB { i } => format!("mainclasIIIB(i={i})"),
            FamilyTag::MainclasIV => "mainclasIV".into(),
            FamilyTag::MainclasIVAa => "mainclasIVA(a)".into(),
            FamilyTag::MainclasIVAb => "mainclasIVA(b)".into(),
            FamilyTag::MainclasV => "mainclasV".into(),
        }
    }
}

/// An α-constacyclic code of length n over GF(q), presented by its defining
/// set and generator polynomial.
#[derive(Clone)]
pub struct ConstacyclicCode {
    field: Arc<FieldCtx>,
    profile: CosetProfile,
    alpha: u32,
    defining_set: Vec<u64>,
    generator: Poly,
    dim: usize,
    designed_distance: u64,
    run: (u64, u64),
    family: FamilyTag,
}

impl std::fmt::Debug for ConstacyclicCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}, >={}]_{} ({})",
            self.profile.n,
            self.dim,
            self.designed_distance,
            self.profile.q,
            self.family.name()
        )
    }
}

impl ConstacyclicCode {
    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }
    pub fn profile(&self) -> &CosetProfile {
        &self.profile
    }
    pub fn n(&self) -> usize {
        self.profile.n as usize
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn alpha(&self) -> FieldElement {
        self.field.el(self.alpha)
    }
    pub fn defining_set(&self) -> &[u64] {
        &self.defining_set
    }
    pub fn generator(&self) -> &Poly {
        &self.generator
    }
    pub fn designed_distance(&self) -> u64 {
        self.designed_distance
    }
    /// The (start, length) of the longest consecutive root run.
    pub fn run(&self) -> (u64, u64) {
        self.run
    }
    pub fn family(&self) -> FamilyTag {
        self.family
    }

    /// Generator matrix: k rows, row i holding the coefficients of x^i g(x)
    /// (degree < n, so no reduction occurs).
    pub fn generator_matrix(&self) -> MatrixQ {
        let n = self.n();
        let g = self.generator.coeffs();
        let mut rows = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut row = vec![0u32; n];
            row[i..i + g.len()].copy_from_slice(g);
            rows.push(row);
        }
        if rows.is_empty() {
            MatrixQ::zeros(self.field.clone(), 0, n)
        } else {
            MatrixQ::from_enc_rows(self.field.clone(), rows)
        }
    }

    /// True iff c(β^e) = 0 for every e in the defining set; computed as
    /// divisibility of the word polynomial by the generator.
    pub fn is_codeword(&self, c: &[u32]) -> Result<bool, CodeError> {
        if c.len() != self.n() {
            return Err(CodeError::LengthMismatch { got: c.len(), want: self.n() });
        }
        let word = Poly::from_enc(self.field.clone(), c.to_vec());
        Ok(self.generator.divides(&word))
    }

    /// The α-constacyclic shift (c_0, ..., c_{n-1}) -> (α c_{n-1}, c_0, ...).
    pub fn constacyclic_shift(&self, c: &[u32]) -> Vec<u32> {
        let n = c.len();
        let mut out = Vec::with_capacity(n);
        out.push(self.field.mul_enc(self.alpha, c[n - 1]));
        out.extend_from_slice(&c[..n - 1]);
        out
    }

    /// Generator matrix of the Euclidean dual: a null-space basis of the
    /// generator matrix, dimension n - k.
    pub fn dual_generator_matrix(&self) -> MatrixQ {
        if self.dim == 0 {
            return MatrixQ::identity(self.field.clone(), self.n());
        }
        self.generator_matrix().null_space()
    }

    /// True when the defining set equals the coset closure of its designed
    /// run (the condition under which the expanded run matrix has full rank
    /// n - k).
    pub fn defining_set_is_run_closure(&self) -> bool {
        let (b, len) = self.run;
        if len == 0 {
            return self.defining_set.is_empty();
        }
        let mut closure = BTreeSet::new();
        for j in 0..len {
            let e = (b + self.profile.r * j) % self.profile.rn;
            for &x in &orbit(e, &self.profile).elements {
                closure.insert(x);
            }
        }
        closure == self.defining_set.iter().copied().collect()
    }

    /// Parity-check matrix over GF(q): the (δ-1) × n matrix with rows
    /// (β^{(b+rj)c})_c for the designed run, expanded into m rows each over
    /// the base field, then reduced top-down keeping original pivot rows.
    /// When the defining set is exactly the coset closure of the run the
    /// result has full rank n - k; this is checked.
    pub fn parity_check_matrix(&self, tower: &ExtensionTower) -> Result<MatrixQ, CodeError> {
        let h = self.parity_check_matrix_unchecked(tower)?;
        if self.defining_set_is_run_closure() && h.rows() != self.n() - self.dim {
            return Err(CodeError::RankMismatch { got: h.rows(), want: self.n() - self.dim });
        }
        Ok(h)
    }

    fn parity_check_matrix_unchecked(&self, tower: &ExtensionTower) -> Result<MatrixQ, CodeError> {
        let (b, len) = self.run;
        let n = self.n();
        if len == 0 {
            return Ok(MatrixQ::zeros(self.field.clone(), 0, n));
        }
        let ext = tower.ext();
        let mut expanded: Vec<Vec<u32>> = Vec::with_capacity(len as usize * tower.m() as usize);
        for j in 0..len {
            let e = (b + self.profile.r * j) % self.profile.rn;
            let root = tower.beta_pow(e).enc();
            let mut row = Vec::with_capacity(n);
            let mut cur = 1u32;
            for _ in 0..n {
                row.push(cur);
                cur = ext.mul_enc(cur, root);
            }
            // expand each extension row into m base-field rows
            let mut base_rows: Vec<Vec<u32>> =
                (0..tower.m()).map(|_| Vec::with_capacity(n)).collect();
            for &v in &row {
                for (jj, coord) in tower.expand_elem_enc(v).into_iter().enumerate() {
                    base_rows[jj].push(coord);
                }
            }
            expanded.extend(base_rows);
        }
        let stacked = MatrixQ::from_enc_rows(self.field.clone(), expanded);
        Ok(stacked.reduce_keep_pivot_rows())
    }
}

/// Construct the α-constacyclic code with the given coset-closed defining
/// set: generator = product of the minimal polynomials of the distinct
/// cosets, dimension n - |Z|, designed distance from the longest run.
pub fn code_from_defining_set(
    tower: &ExtensionTower,
    z: &BTreeSet<u64>,
    family: FamilyTag,
) -> Result<ConstacyclicCode, CodeError> {
    let profile = CosetProfile::new(tower.q(), tower.r(), tower.n())?;
    for &e in z {
        if !profile.contains(e) {
            return Err(CodeError::OutsideOrn(e));
        }
    }
    // closure check and coset representatives
    let mut reps = BTreeSet::new();
    for &e in z {
        let c = orbit(e, &profile);
        for &x in &c.elements {
            if !z.contains(&x) {
                return Err(CodeError::NotCosetClosed(x));
            }
        }
        reps.insert(c.representative);
    }
    let base = tower.base().clone();
    let mut generator = Poly::one(base.clone());
    for &rep in &reps {
        generator = generator.mul(&minimal_poly(rep, tower)?);
    }
    let alpha = tower.alpha().enc();
    let modulus_poly = Poly::x_pow_minus(base.clone(), profile.n as usize, alpha);
    if !generator.divides(&modulus_poly) {
        return Err(CodeError::GeneratorDivision);
    }
    let dim = profile.n as usize - z.len();
    debug_assert_eq!(generator.degree().unwrap_or(0), z.len());
    let run = longest_run(z, &profile);
    Ok(ConstacyclicCode {
        field: base,
        profile,
        alpha,
        defining_set: z.iter().copied().collect(),
        generator,
        dim,
        designed_distance: run.1 + 1,
        run,
        family,
    })
}

// ---------------------------------------------------------------------------
// named families
// ---------------------------------------------------------------------------

/// Which block family to construct; index ranges are validated against each
/// family's admissible range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockFamily {
    MainclasI { i: u64 },
    MainclasII { i: u64 },
    MainclasIII { i: u64 },
    MainclasIIIA { i: u64 },
    MainclasIIIB { i: u64 },
    MainclasIV,
    MainclasIVAa,
    MainclasIVAb,
    MainclasV,
}

/// Parameters a family instance claims: dimension always exact, distance
/// either exact (MDS families) or a lower bound with a Singleton-defect cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockClaim {
    pub n: u64,
    pub k: u64,
    pub d_lower: u64,
    pub d_exact: bool,
    /// Maximum admissible Singleton defect (0 = MDS, 1 = almost MDS).
    pub max_defect: Option<u64>,
}

impl BlockFamily {
    /// The profile this family lives on, given q (and r where it applies).
    pub fn profile_for(&self, q: u64, r: u64) -> Result<CosetProfile, CodeError> {
        let (need_class, n): (&[CongruenceClass], u64) = match self {
            BlockFamily::MainclasI { .. } => (&[CongruenceClass::L1], q + 1),
            BlockFamily::MainclasII { .. } => (&[CongruenceClass::L2], q + 1),
            BlockFamily::MainclasIII { .. } => (&[CongruenceClass::L3], (q + 1) / 2),
            BlockFamily::MainclasIIIA { .. } | BlockFamily::MainclasIIIB { .. } => {
                (&[CongruenceClass::L5], q + 1)
            }
            BlockFamily::MainclasIV => {
                if q % 4 != 3 || q % 2 == 0 {
                    return Err(CodeError::FamilyPrecondition(format!(
                        "mainclasIV needs q = 3 (mod 4), got q = {q}"
                    )));
                }
                (&[CongruenceClass::Other], 2 * q + 2)
            }
            BlockFamily::MainclasIVAa => {
                if q % 2 == 0 || q < 5 {
                    return Err(CodeError::FamilyPrecondition("mainclasIVA(a) needs odd q >= 5".into()));
                }
                (&[CongruenceClass::Other], 2 * q - 2)
            }
            BlockFamily::MainclasIVAb => {
                if q % 2 == 0 || q < 7 {
                    return Err(CodeError::FamilyPrecondition("mainclasIVA(b) needs odd q >= 7".into()));
                }
                (&[CongruenceClass::Other], 2 * q - 2)
            }
            BlockFamily::MainclasV => {
                if q % 4 != 1 {
                    return Err(CodeError::FamilyPrecondition(format!(
                        "mainclasV needs q = 1 (mod 4), got q = {q}"
                    )));
                }
                (&[CongruenceClass::Other], 2 * q + 2)
            }
        };
        let r = match self {
            BlockFamily::MainclasIV
            | BlockFamily::MainclasIVAa
            | BlockFamily::MainclasIVAb
            | BlockFamily::MainclasV => 1,
            _ => r,
        };
        let profile = CosetProfile::new(q, r, n)?;
        if !need_class.contains(&profile.class) {
            return Err(CodeError::FamilyPrecondition(format!(
                "profile (q={q}, r={r}, n={n}) has class {:?}, which this family does not accept",
                profile.class
            )));
        }
        Ok(profile)
    }

    /// The theorem's claimed parameters on the given profile.
    pub fn claim(&self, profile: &CosetProfile) -> Result<BlockClaim, CodeError> {
        let n = profile.n;
        let claim = match *self {
            BlockFamily::MainclasI { i } => {
                check_range(i, n / 2 - 1, "mainclasI: 0 <= i <= n/2 - 1")?;
                BlockClaim { n, k: n - 2 * i - 1, d_lower: 2 * i + 2, d_exact: true, max_defect: Some(0) }
            }
            BlockFamily::MainclasII { i } => {
                check_range(i, n / 2 - 2, "mainclasII: 0 <= i <= n/2 - 2")?;
                BlockClaim { n, k: n - 2 * i - 2, d_lower: 2 * i + 3, d_exact: true, max_defect: Some(0) }
            }
            BlockFamily::MainclasIII { i } => {
                check_range(i, (n - 1) / 2 - 1, "mainclasIII: 0 <= i <= (n-1)/2 - 1")?;
                BlockClaim { n, k: n - 2 * i - 1, d_lower: 2 * i + 2, d_exact: true, max_defect: Some(0) }
            }
            BlockFamily::MainclasIIIA { i } => {
                check_range(i, (n - 1) / 2 - 2, "mainclasIIIA: 0 <= i <= (n-1)/2 - 2")?;
                BlockClaim { n, k: n - 2 * i - 2, d_lower: 2 * i + 3, d_exact: true, max_defect: Some(0) }
            }
            BlockFamily::MainclasIIIB { i } => {
                check_range(i, (n - 1) / 2 - 1, "mainclasIIIB: 0 <= i <= (n-1)/2 - 1")?;
                BlockClaim { n, k: n - 2 * i - 1, d_lower: 2 * i + 2, d_exact: true, max_defect: Some(0) }
            }
            BlockFamily::MainclasIV => {
                BlockClaim { n, k: n - 4, d_lower: 4, d_exact: false, max_defect: Some(1) }
            }
            BlockFamily::MainclasIVAa => {
                BlockClaim { n, k: n - 4, d_lower: 4, d_exact: false, max_defect: Some(1) }
            }
            BlockFamily::MainclasIVAb => {
                BlockClaim { n, k: n - 7, d_lower: 6, d_exact: false, max_defect: None }
            }
            BlockFamily::MainclasV => {
                BlockClaim { n, k: n - 3, d_lower: 3, d_exact: false, max_defect: Some(1) }
            }
        };
        Ok(claim)
    }

    /// The defining set prescribed by the theorem.
    pub fn defining_set(&self, profile: &CosetProfile) -> Result<BTreeSet<u64>, CodeError> {
        let r = profile.r as i128;
        let rn = profile.rn as i128;
        let n = profile.n;
        let md = |x: i128| -> u64 { x.rem_euclid(rn) as u64 };
        let union_of = |labels: Vec<u64>| -> BTreeSet<u64> {
            let mut z = BTreeSet::new();
            for l in labels {
                z.extend(orbit(l, profile).elements.iter().copied());
            }
            z
        };
        let z = match *self {
            BlockFamily::MainclasI { i } => {
                let s = (n / 2) as i128;
                union_of((0..=i as i128).map(|l| md(s + r * l)).collect())
            }
            BlockFamily::MainclasII { i } => {
                let t = ((n + profile.r) / 2) as i128;
                union_of((0..=i as i128).map(|l| md(t + r * l)).collect())
            }
            BlockFamily::MainclasIII { i } => {
                let nn = n as i128;
                union_of((0..=i as i128).map(|l| md(nn - r * l)).collect())
            }
            BlockFamily::MainclasIIIA { i } => {
                let s = 1 + r * ((profile.cofactor - 1) / 2) as i128;
                union_of((0..=i as i128).map(|l| md(s - r * l)).collect())
            }
            BlockFamily::MainclasIIIB { i } => {
                let s = 1 + r * ((profile.cofactor - 1) / 2) as i128;
                let t = md(s + r * (1 + (profile.q / 2) as i128));
                let mut labels = vec![t];
                labels.extend((1..=i as i128).map(|l| md(t as i128 - r * l)));
                union_of(labels)
            }
            BlockFamily::MainclasIV => {
                let s = (profile.q - 1) / 2;
                union_of(vec![s, s + 1])
            }
            BlockFamily::MainclasIVAa => union_of(vec![2, 3, 4]),
            BlockFamily::MainclasIVAb => union_of(vec![0, 1, 2, 3, 4]),
            BlockFamily::MainclasV => {
                let s = (profile.q + 1) / 2;
                union_of(vec![s, s + 1])
            }
        };
        Ok(z)
    }

    pub fn tag(&self) -> FamilyTag {
        match *self {
            BlockFamily::MainclasI { i } => FamilyTag::MainclasI { i },
            BlockFamily::MainclasII { i } => FamilyTag::MainclasII { i },
            BlockFamily::MainclasIII { i } => FamilyTag::MainclasIII { i },
            BlockFamily::MainclasIIIA { i } => FamilyTag::MainclasIIIA { i },
            BlockFamily::MainclasIIIB { i } => FamilyTag::MainclasIIIB { i },
            BlockFamily::MainclasIV => FamilyTag::MainclasIV,
            BlockFamily::MainclasIVAa => FamilyTag::MainclasIVAa,
            BlockFamily::MainclasIVAb => FamilyTag::MainclasIVAb,
            BlockFamily::MainclasV => FamilyTag::MainclasV,
        }
    }
}

fn check_range(i: u64, max: u64, what: &str) -> Result<(), CodeError> {
    if i > max {
        return Err(CodeError::IndexRange(format!("{what} (got i = {i}, max {max})")));
    }
    Ok(())
}

/// Build the family instance on the tower's profile, verifying the claimed
/// dimension and designed distance.
pub fn build_family(
    family: BlockFamily,
    tower: &ExtensionTower,
) -> Result<ConstacyclicCode, CodeError> {
    let profile = family.profile_for(tower.q(), tower.r())?;
    if profile.n != tower.n() || profile.r != tower.r() {
        return Err(CodeError::FamilyPrecondition(format!(
            "tower is for (q={}, r={}, n={}), family needs (q={}, r={}, n={})",
            tower.q(),
            tower.r(),
            tower.n(),
            profile.q,
            profile.r,
            profile.n
        )));
    }
    let claim = family.claim(&profile)?;
    let z = family.defining_set(&profile)?;
    let code = code_from_defining_set(tower, &z, family.tag())?;
    if code.dim() as u64 != claim.k {
        return Err(CodeError::FamilyPrecondition(format!(
            "{}: dimension {} != claimed {}",
            family.tag().name(),
            code.dim(),
            claim.k
        )));
    }
    if code.designed_distance() < claim.d_lower {
        return Err(CodeError::FamilyPrecondition(format!(
            "{}: designed distance {} < claimed {}",
            family.tag().name(),
            code.designed_distance(),
            claim.d_lower
        )));
    }
    Ok(code)
}

/// Serialization record for a code, with the exact field names the CLI
/// publishes.
#[derive(Debug, Clone, Serialize)]
pub struct CodeRecord {
    pub p: u64,
    pub e: u32,
    pub modulus: Vec<u64>,
    pub r: u64,
    pub n: u64,
    pub alpha_power: u64,
    pub defining_set: Vec<u64>,
    pub generator_coeffs: Vec<u64>,
    pub family_tag: String,
    pub dim: u64,
    pub designed_distance: u64,
}

impl CodeRecord {
    pub fn of(code: &ConstacyclicCode) -> CodeRecord {
        let f = code.field();
        let alpha_power = if code.alpha().is_zero() {
            0
        } else {
            f.dlog(code.alpha()).unwrap_or(0)
        };
        CodeRecord {
            p: f.characteristic(),
            e: f.degree(),
            modulus: f.modulus().to_vec(),
            r: code.profile().r,
            n: code.profile().n,
            alpha_power,
            defining_set: code.defining_set().to_vec(),
            generator_coeffs: code.generator().coeffs().iter().map(|&c| c as u64).collect(),
            family_tag: code.family().name(),
            dim: code.dim() as u64,
            designed_distance: code.designed_distance(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tower(q: u64, r: u64, n: u64) -> Arc<ExtensionTower> {
        ExtensionTower::build_for(q, r, n).unwrap()
    }

    #[test]
    fn minimal_poly_singleton() {
        // C_5 = {5} for q=9, r=4, n=10: degree-1 polynomial x - beta^5
        let t = tower(9, 4, 10);
        let m = minimal_poly(5, &t).unwrap();
        assert_eq!(m.degree(), Some(1));
        let beta5 = t.beta_pow(5);
        let pulled = t.try_unembed(beta5).unwrap();
        assert_eq!(m.coeff(0), t.base().neg_enc(pulled.enc()));
    }

    #[test]
    fn minimal_poly_negacyclic_pair() {
        // q=3, r=2, n=4, GF(9) = GF(3)[w]/(w^2-w-1): M^(3) = x^2 + 2x + 2
        let t = tower(3, 2, 4);
        let m = minimal_poly(3, &t).unwrap();
        assert_eq!(m.coeffs(), &[2, 2, 1]);
    }

    #[test]
    fn minimal_poly_of_unity() {
        // cyclic case: beta^0 = 1, minimal polynomial x - 1
        let t = tower(8, 1, 7);
        let m = minimal_poly(0, &t).unwrap();
        let one = t.base().one().enc();
        assert_eq!(m.coeffs(), &[t.base().neg_enc(one), 1]);
    }

    #[test]
    fn negacyclic_4_2_3() {
        let t = tower(3, 2, 4);
        let z: BTreeSet<u64> = [1, 3].into_iter().collect();
        let code = code_from_defining_set(&t, &z, FamilyTag::Custom).unwrap();
        assert_eq!(code.dim(), 2);
        assert_eq!(code.designed_distance(), 3);
        assert_eq!(code.generator().coeffs(), &[2, 2, 1]);
        assert_eq!(code.alpha().enc(), 2);
        // x^4 + 1 = (x^2+2x+2)(x^2+x+2) over GF(3)
        let modulus = Poly::x_pow_minus(t.base().clone(), 4, code.alpha().enc());
        let (cogen, rem) = modulus.divrem(code.generator());
        assert!(rem.is_zero());
        assert_eq!(cogen.coeffs(), &[2, 1, 1]);
    }

    #[test]
    fn empty_defining_set_is_whole_space() {
        let t = tower(3, 2, 4);
        let code = code_from_defining_set(&t, &BTreeSet::new(), FamilyTag::Custom).unwrap();
        assert_eq!(code.dim(), 4);
        assert_eq!(code.designed_distance(), 1);
        assert_eq!(code.generator().coeffs(), &[1]);
        assert!(code.is_codeword(&[1, 0, 0, 0]).unwrap());
    }

    #[test]
    fn q9_run_code() {
        // Z = {1, 5, 9}: [10, 7]_9 with designed distance 4
        let t = tower(9, 4, 10);
        let z: BTreeSet<u64> = [1, 5, 9].into_iter().collect();
        let code = code_from_defining_set(&t, &z, FamilyTag::Custom).unwrap();
        assert_eq!(code.dim(), 7);
        assert_eq!(code.designed_distance(), 4);
    }

    #[test]
    fn rejects_non_closed_sets() {
        let t = tower(9, 4, 10);
        let z: BTreeSet<u64> = [1].into_iter().collect(); // orbit is {1, 9}
        assert!(matches!(
            code_from_defining_set(&t, &z, FamilyTag::Custom),
            Err(CodeError::NotCosetClosed(9))
        ));
        let z: BTreeSet<u64> = [2].into_iter().collect();
        assert!(matches!(
            code_from_defining_set(&t, &z, FamilyTag::Custom),
            Err(CodeError::OutsideOrn(2))
        ));
    }

    #[test]
    fn parity_check_negacyclic() {
        let t = tower(3, 2, 4);
        let z: BTreeSet<u64> = [1, 3].into_iter().collect();
        let code = code_from_defining_set(&t, &z, FamilyTag::Custom).unwrap();
        let h = code.parity_check_matrix(&t).unwrap();
        assert_eq!((h.rows(), h.cols()), (2, 4));
        let g = code.generator_matrix();
        let prod = h.mul(&g.transpose());
        assert!(prod.is_zero());
    }

    #[test]
    fn parity_check_singleton_coset() {
        // Z = {5} over q=9: one beta-row expands to 2 rows of rank 1
        let t = tower(9, 4, 10);
        let z: BTreeSet<u64> = [5].into_iter().collect();
        let code = code_from_defining_set(&t, &z, FamilyTag::Custom).unwrap();
        assert_eq!(code.dim(), 9);
        let h = code.parity_check_matrix(&t).unwrap();
        assert_eq!(h.rows(), 1);
    }

    #[test]
    fn whole_space_has_empty_parity() {
        let t = tower(3, 2, 4);
        let code = code_from_defining_set(&t, &BTreeSet::new(), FamilyTag::Custom).unwrap();
        let h = code.parity_check_matrix(&t).unwrap();
        assert_eq!(h.rows(), 0);
    }

    #[test]
    fn is_codeword_basics() {
        let t = tower(3, 2, 4);
        let z: BTreeSet<u64> = [1, 3].into_iter().collect();
        let code = code_from_defining_set(&t, &z, FamilyTag::Custom).unwrap();
        let mut g = code.generator().coeffs().to_vec();
        g.resize(4, 0);
        assert!(code.is_codeword(&g).unwrap());
        let shifted = code.constacyclic_shift(&g);
        assert!(code.is_codeword(&shifted).unwrap());
        assert!(!code.is_codeword(&[1, 0, 0, 0]).unwrap());
        assert!(code.is_codeword(&[0, 0, 0]).is_err());
    }

    #[test]
    fn shift_closure_random_codewords() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (q, r, n, z) in [
            (3u64, 2u64, 4u64, vec![1u64, 3]),
            (9, 4, 10, vec![1, 5, 9]),
            (5, 4, 6, vec![1, 5]),
        ] {
            let t = tower(q, r, n);
            let zs: BTreeSet<u64> = z.into_iter().collect();
            let code = code_from_defining_set(&t, &zs, FamilyTag::Custom).unwrap();
            let g = code.generator_matrix();
            for _ in 0..1000 {
                // random combination of generator rows
                let mut c = vec![0u32; code.n()];
                for i in 0..code.dim() {
                    let coef = rng.gen_range(0..q) as u32;
                    for (cc, &gg) in c.iter_mut().zip(g.row(i)) {
                        *cc = code.field().add_enc(*cc, code.field().mul_enc(coef, gg));
                    }
                }
                let shifted = code.constacyclic_shift(&c);
                assert!(code.is_codeword(&shifted).unwrap());
            }
        }
    }

    #[test]
    fn dual_dimensions() {
        let t = tower(9, 4, 10);
        // Z = C5 ∪ C9 ∪ C13 ∪ C17: [10, 3]; dual is [10, 7]
        let z: BTreeSet<u64> = [5, 1, 9, 13, 37, 17, 33].into_iter().collect();
        let code = code_from_defining_set(&t, &z, FamilyTag::Custom).unwrap();
        assert_eq!(code.dim(), 3);
        let dual = code.dual_generator_matrix();
        assert_eq!(dual.rows(), 7);
        let prod = dual.mul(&code.generator_matrix().transpose());
        assert!(prod.is_zero());
    }

    #[test]
    fn generator_times_cogenerator_is_modulus() {
        for (q, r, n, fam) in [
            (9u64, 4u64, 10u64, BlockFamily::MainclasI { i: 1 }),
            (11, 2, 12, BlockFamily::MainclasII { i: 1 }),
            (17, 2, 9, BlockFamily::MainclasIII { i: 1 }),
            (16, 3, 17, BlockFamily::MainclasIIIA { i: 1 }),
            (16, 3, 17, BlockFamily::MainclasIIIB { i: 2 }),
        ] {
            let t = tower(q, r, n);
            let code = build_family(fam, &t).unwrap();
            let modulus = Poly::x_pow_minus(t.base().clone(), code.n(), code.alpha().enc());
            let (_, rem) = modulus.divrem(code.generator());
            assert!(rem.is_zero(), "{fam:?}");
        }
    }

    #[test]
    fn family_shapes() {
        // mainclasI i=1 over q=9 r=4: [10, 7, 4]
        let t = tower(9, 4, 10);
        let c = build_family(BlockFamily::MainclasI { i: 1 }, &t).unwrap();
        assert_eq!((c.n(), c.dim(), c.designed_distance()), (10, 7, 4));
        // mainclasIV q=7: [16, 12, >=4]
        let t = tower(7, 1, 16);
        let c = build_family(BlockFamily::MainclasIV, &t).unwrap();
        assert_eq!((c.n(), c.dim()), (16, 12));
        assert!(c.designed_distance() >= 4);
        assert_eq!(c.defining_set(), &[3, 4, 5, 12]);
        // mainclasV q=5: [12, 9, >=3]
        let t = tower(5, 1, 12);
        let c = build_family(BlockFamily::MainclasV, &t).unwrap();
        assert_eq!((c.n(), c.dim()), (12, 9));
        assert!(c.designed_distance() >= 3);
        // mainclasIVA(b) q=7: [12, 5, >=6]
        let t = tower(7, 1, 12);
        let c = build_family(BlockFamily::MainclasIVAb, &t).unwrap();
        assert_eq!((c.n(), c.dim()), (12, 5));
        assert!(c.designed_distance() >= 6);
    }

    #[test]
    fn family_range_checks() {
        let t = tower(9, 4, 10);
        assert!(build_family(BlockFamily::MainclasI { i: 5 }, &t).is_err());
        assert!(build_family(BlockFamily::MainclasII { i: 0 }, &t).is_err()); // wrong class
    }

    #[test]
    fn dimension_law_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let t = tower(9, 4, 10);
        let profile = CosetProfile::new(9, 4, 10).unwrap();
        for _ in 0..50 {
            let mut z = BTreeSet::new();
            for e in profile.orn() {
                if rng.gen_bool(0.5) {
                    z.extend(orbit(e, &profile).elements.iter().copied());
                }
            }
            let code = code_from_defining_set(&t, &z, FamilyTag::Custom).unwrap();
            assert_eq!(code.dim(), 10 - z.len());
        }
    }

    #[test]
    fn bch_bound_exhaustive_small() {
        // min distance >= designed distance, checked by full enumeration
        let f3 = make_field(3, 1).unwrap();
        let _ = f3;
        for (q, r, n, z) in [
            (3u64, 2u64, 4u64, vec![1u64, 3]),
            (5, 4, 6, vec![1, 5]),
            (5, 4, 6, vec![1, 5, 9, 21]),
            (7, 2, 8, vec![5, 3, 13, 7, 11]),
        ] {
            let t = tower(q, r, n);
            let zs: BTreeSet<u64> = z.into_iter().collect();
            let code = code_from_defining_set(&t, &zs, FamilyTag::Custom).unwrap();
            let g = code.generator_matrix();
            let k = code.dim();
            let mut min_wt = u64::MAX;
            let total = (q as u128).pow(k as u32) as u64;
            for msg in 1..total {
                let mut c = vec![0u32; code.n()];
                let mut m = msg;
                for row in 0..k {
                    let coef = (m % q) as u32;
                    m /= q;
                    if coef != 0 {
                        for (cc, &gg) in c.iter_mut().zip(g.row(row)) {
                            *cc = code.field().add_enc(*cc, code.field().mul_enc(coef, gg));
                        }
                    }
                }
                let wt = c.iter().filter(|&&x| x != 0).count() as u64;
                min_wt = min_wt.min(wt);
            }
            assert!(
                min_wt >= code.designed_distance(),
                "q={q} r={r} Z={:?}: {min_wt} < {}",
                code.defining_set(),
                code.designed_distance()
            );
        }
    }
}
