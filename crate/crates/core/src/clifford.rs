//! Real representations of Clifford algebras and symmetric Clifford systems.
//!
//! A symmetric Clifford system on ℝ^{2l} is a family of symmetric matrices
//! `P_0, …, P_m` with `P_a P_b + P_b P_a = 2 δ_ab I`. It is built from
//! `m - 1` skew generators `E_1, …, E_{m-1}` on ℝ^l satisfying
//! `E_a E_b + E_b E_a = -2 δ_ab I` via the block layout
//!
//! ```text
//! P_0 = [ I  0 ]   P_1 = [ 0  I ]   P_a = [  0        E_{a-1} ]
//!       [ 0 -I ]         [ I  0 ]         [ -E_{a-1}  0       ]   (a >= 2)
//! ```
//!
//! # Generator construction
//!
//! Skew generators on the minimal dimension `δ(ν+1)` come from a fixed table:
//!
//! * `ν = 1`: the quarter-turn `J = [[0,-1],[1,0]]` on ℝ².
//! * `ν = 2, 3`: left multiplication by `i, j, k` on the quaternions ℝ⁴.
//! * `ν = 4..=7`: the first `ν` of the seven matrices on ℝ⁸ = ℍ ⊗ ℝ²
//!   `L_i⊗K, L_j⊗K, L_k⊗K, I⊗J, R_i⊗S, R_j⊗S, R_k⊗S`, where `L_q`/`R_q` are
//!   left/right quaternion multiplication, `K = diag(1,-1)` and
//!   `S = [[0,1],[1,0]]`.
//! * `ν >= 8`: with `Σ_0, …, Σ_8` the symmetric system on ℝ¹⁶ built from the
//!   `ν = 7` generators, and `F_1, …, F_{ν-8}` the generators on ℝⁿ, the
//!   family `F_j ⊗ Σ_0` together with `I_n ⊗ Σ_0 Σ_a (a = 1..8)` lives on ℝ^{16n}.
//!
//! For `l = k δ(ν+1)` the generators are repeated block-diagonally, `I_k ⊗ E`.
//! Every entry of every constructed matrix is exactly `0` or `±1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::dense::{axpy, norm, Matrix};
use crate::numerics::{cluster_spectrum, symmetric_eigenvalues, SymmetricMatrix};

/// Tolerance for the algebraic relations of constructed or loaded matrices.
pub const RELATION_TOL: f64 = 1e-12;

const DELTA_TABLE: [usize; 8] = [1, 2, 4, 4, 8, 8, 8, 8];

/// Dimension of an irreducible module of the Clifford algebra on `m - 1`
/// generators (the Radon-Hurwitz numbers), `δ(m + 8) = 16 δ(m)`.
pub fn delta_dim(m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::Domain("delta(m) requires m >= 1".into()));
    }
    let periods = (m - 1) / 8;
    let base = DELTA_TABLE[(m - 1) % 8];
    16usize
        .checked_pow(periods as u32)
        .and_then(|p| p.checked_mul(base))
        .ok_or_else(|| Error::Domain(format!("delta({m}) overflows usize")))
}

/// `E_1, …, E_ν` on ℝ^l with `E_a E_b + E_b E_a = -2 δ_ab I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewGeneratorSet {
    l: usize,
    generators: Vec<Matrix>,
}

impl SkewGeneratorSet {
    pub fn nu(&self) -> usize {
        self.generators.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Checks orthogonality and the anticommutation relations; returns the
    /// worst entrywise residual.
    pub fn relation_residual(&self) -> f64 {
        let id = Matrix::identity(self.l);
        let mut worst = 0.0_f64;
        for (a, ea) in self.generators.iter().enumerate() {
            worst = worst.max(ea.transpose().matmul(ea).sub(&id).max_abs());
            for eb in &self.generators[a..] {
                let target = if std::ptr::eq(ea, eb) { -2.0 } else { 0.0 };
                let anti = ea.matmul(eb).add(&eb.matmul(ea));
                worst = worst.max(anti.sub(&id.scaled(target)).max_abs());
            }
        }
        worst
    }

    fn validate(&self) -> Result<()> {
        if let Some(bad) = self
            .generators
            .iter()
            .find(|e| e.rows() != self.l || e.cols() != self.l)
        {
            return Err(Error::Validation(format!(
                "skew generator of shape {}x{} on l = {}",
                bad.rows(),
                bad.cols(),
                self.l
            )));
        }
        let r = self.relation_residual();
        if r > RELATION_TOL {
            return Err(Error::Validation(format!(
                "skew generators violate E_a E_b + E_b E_a = -2 delta_ab I (residual {r:e})"
            )));
        }
        let minimal = delta_dim(self.nu() + 1)?;
        if !self.l.is_multiple_of(minimal) {
            return Err(Error::InadmissibleDimension {
                m: self.nu() + 1,
                l: self.l,
                minimal,
            });
        }
        Ok(())
    }
}

fn quat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn unit_quat(k: usize) -> [f64; 4] {
    let mut e = [0.0; 4];
    e[k] = 1.0;
    e
}

/// Matrix of `q ↦ u q` (left) or `q ↦ q u` (right) in the basis `1, i, j, k`.
fn quat_mult_matrix(u: usize, left: bool) -> Matrix {
    let mut m = Matrix::zeros(4, 4);
    for c in 0..4 {
        let col = if left {
            quat_mul(unit_quat(u), unit_quat(c))
        } else {
            quat_mul(unit_quat(c), unit_quat(u))
        };
        for (r, v) in col.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    m
}

fn mat2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
    Matrix::from_row_major(2, 2, vec![a, b, c, d]).expect("2x2")
}

/// The seven anticommuting complex structures on ℝ⁸.
fn octonionic_seven() -> Vec<Matrix> {
    let k = mat2(1.0, 0.0, 0.0, -1.0);
    let s = mat2(0.0, 1.0, 1.0, 0.0);
    let j = mat2(0.0, -1.0, 1.0, 0.0);
    let mut out = Vec::with_capacity(7);
    for u in 1..4 {
        out.push(quat_mult_matrix(u, true).kron(&k));
    }
    out.push(Matrix::identity(4).kron(&j));
    for u in 1..4 {
        out.push(quat_mult_matrix(u, false).kron(&s));
    }
    out
}

/// Generators on the minimal dimension `δ(ν+1)`.
fn minimal_generators(nu: usize) -> Vec<Matrix> {
    match nu {
        0 => Vec::new(),
        1 => vec![mat2(0.0, -1.0, 1.0, 0.0)],
        2 | 3 => (1..=nu).map(|u| quat_mult_matrix(u, true)).collect(),
        4..=7 => octonionic_seven().into_iter().take(nu).collect(),
        _ => {
            let base = minimal_generators(nu - 8);
            let n = base.first().map_or(1, Matrix::rows);
            let sigma = symmetric_blocks(&octonionic_seven(), 8);
            let s0 = &sigma[0];
            let mut out: Vec<Matrix> = base.iter().map(|f| f.kron(s0)).collect();
            let id = Matrix::identity(n);
            for sa in &sigma[1..] {
                out.push(id.kron(&s0.matmul(sa)));
            }
            out
        }
    }
}

/// Symmetric system `P_0, …, P_{ν+1}` on ℝ^{2l} from skew generators on ℝ^l.
fn symmetric_blocks(generators: &[Matrix], l: usize) -> Vec<Matrix> {
    let id = Matrix::identity(l);
    let mut p0 = Matrix::zeros(2 * l, 2 * l);
    p0.set_block(0, 0, &id);
    p0.set_block(l, l, &id.scaled(-1.0));
    let mut p1 = Matrix::zeros(2 * l, 2 * l);
    p1.set_block(0, l, &id);
    p1.set_block(l, 0, &id);
    let mut out = vec![p0, p1];
    for e in generators {
        let mut p = Matrix::zeros(2 * l, 2 * l);
        p.set_block(0, l, e);
        p.set_block(l, 0, &e.scaled(-1.0));
        out.push(p);
    }
    out
}

/// Builds `ν` skew generators on ℝ^l. Deterministic.
pub fn build_skew_generators(nu: usize, l: usize) -> Result<SkewGeneratorSet> {
    let minimal = delta_dim(nu + 1)?;
    if l == 0 || !l.is_multiple_of(minimal) {
        return Err(Error::InadmissibleDimension { m: nu + 1, l, minimal });
    }
    let copies = Matrix::identity(l / minimal);
    let generators = minimal_generators(nu)
        .iter()
        .map(|e| copies.kron(e))
        .collect();
    Ok(SkewGeneratorSet { l, generators })
}

/// A symmetric Clifford system `P_0, …, P_m` on ℝ^{2l}, `l = k δ(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordSystem {
    m: usize,
    l: usize,
    k: usize,
    matrices: Vec<Matrix>,
    skew_source: SkewGeneratorSet,
}

impl CliffordSystem {
    /// Builds the system with the block layout from `m - 1` skew generators
    /// on ℝ^{k δ(m)}.
    pub fn build(m: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::Domain(format!(
                "symmetric Clifford system needs m >= 1 and k >= 1 (got m={m}, k={k})"
            )));
        }
        let l = k * delta_dim(m)?;
        let skew_source = build_skew_generators(m - 1, l)?;
        let matrices = symmetric_blocks(skew_source.generators(), l);
        Ok(Self {
            m,
            l,
            k,
            matrices,
            skew_source,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Ambient dimension `2l`.
    pub fn dim(&self) -> usize {
        2 * self.l
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn p(&self, alpha: usize) -> &Matrix {
        &self.matrices[alpha]
    }

    pub fn skew_source(&self) -> &SkewGeneratorSet {
        &self.skew_source
    }

    /// Multiplicities `(m₁, m₂) = (m, l - m - 1)` of the associated quartic.
    pub fn multiplicities(&self) -> (i64, i64) {
        (self.m as i64, self.l as i64 - self.m as i64 - 1)
    }

    /// Whether `m > 0` and `l - m - 1 > 0`, i.e. the family really has four
    /// distinct principal curvatures.
    pub fn is_nondegenerate(&self) -> bool {
        self.multiplicities().1 > 0
    }

    /// `⟨P_α x, x⟩` for every `α`.
    pub fn quadratic_forms(&self, x: &[f64]) -> Vec<f64> {
        self.matrices.iter().map(|p| p.bilinear(x, x)).collect()
    }

    /// Largest entry of `|P_a P_b + P_b P_a - 2 δ_ab I|` over all pairs.
    pub fn max_anticommutator_residual(&self) -> f64 {
        let id = Matrix::identity(self.dim());
        let mut worst = 0.0_f64;
        for a in 0..=self.m {
            for b in a..=self.m {
                let pa = &self.matrices[a];
                let pb = &self.matrices[b];
                let target = if a == b { 2.0 } else { 0.0 };
                let anti = pa.matmul(pb).add(&pb.matmul(pa));
                worst = worst.max(anti.sub(&id.scaled(target)).max_abs());
            }
        }
        worst
    }

    pub fn max_asymmetry(&self) -> f64 {
        self.matrices.iter().map(Matrix::asymmetry).fold(0.0, f64::max)
    }

    pub fn max_abs_trace(&self) -> f64 {
        self.matrices.iter().map(|p| p.trace().abs()).fold(0.0, f64::max)
    }

    /// Eigenvalue clusters of each `P_α`, as `(value, multiplicity)` lists.
    pub fn eigenvalue_multiplicities(&self) -> Result<Vec<Vec<(f64, usize)>>> {
        self.matrices
            .iter()
            .map(|p| {
                let vals = symmetric_eigenvalues(&SymmetricMatrix::new(p.clone())?, 1e-13)?;
                Ok(cluster_spectrum(&vals, 1e-8))
            })
            .collect()
    }

    fn check_block_layout(&self) -> Result<()> {
        let expected = symmetric_blocks(self.skew_source.generators(), self.l);
        for (a, (p, e)) in self.matrices.iter().zip(&expected).enumerate() {
            let dev = p.sub(e).max_abs();
            if dev > RELATION_TOL {
                return Err(Error::Validation(format!(
                    "P_{a} deviates from the block layout by {dev:e}"
                )));
            }
        }
        Ok(())
    }

    /// Re-checks every invariant of the system.
    pub fn validate(&self) -> Result<()> {
        if self.matrices.len() != self.m + 1 {
            return Err(Error::Validation(format!(
                "expected {} matrices, found {}",
                self.m + 1,
                self.matrices.len()
            )));
        }
        if self.k * delta_dim(self.m)? != self.l {
            return Err(Error::Validation(format!(
                "l = {} does not equal k * delta(m) = {} * {}",
                self.l,
                self.k,
                delta_dim(self.m)?
            )));
        }
        for (a, p) in self.matrices.iter().enumerate() {
            if p.rows() != self.dim() || p.cols() != self.dim() {
                return Err(Error::Validation(format!(
                    "P_{a} has shape {}x{}, expected {d}x{d}",
                    p.rows(),
                    p.cols(),
                    d = self.dim()
                )));
            }
        }
        let checks = [
            ("asymmetry", self.max_asymmetry()),
            ("anticommutator residual", self.max_anticommutator_residual()),
            ("trace", self.max_abs_trace()),
        ];
        for (what, v) in checks {
            if v > RELATION_TOL {
                return Err(Error::Validation(format!("{what} {v:e} exceeds {RELATION_TOL:e}")));
            }
        }
        self.skew_source.validate()?;
        self.check_block_layout()
    }

    /// `P_c = Σ c_α P_α` for a unit vector `c`; missing trailing
    /// coefficients count as zero.
    pub fn unit_combination(&self, c: &[f64]) -> Result<Matrix> {
        if c.is_empty() || c.len() > self.m + 1 {
            return Err(Error::Domain(format!(
                "coefficient vector has length {}, expected 1..={}",
                c.len(),
                self.m + 1
            )));
        }
        let n = norm(c);
        if (n - 1.0).abs() > RELATION_TOL {
            return Err(Error::Domain(format!("coefficient vector has norm {n}, expected 1")));
        }
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for (p, &ca) in self.matrices.iter().zip(c) {
            out = out.add(&p.scaled(ca));
        }
        Ok(out)
    }

    /// `Σ c_α P_α x` without forming the matrix (no normalization check).
    pub fn combination_apply(&self, c: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (p, &ca) in self.matrices.iter().zip(c) {
            if ca != 0.0 {
                axpy(ca, &p.matvec(x), &mut out);
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&CliffordSystemDoc::from(self))?)
    }

    /// Parses and re-validates a serialized system.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: CliffordSystemDoc = serde_json::from_str(s)?;
        Self::try_from(doc)
    }
}

/// Wire form: `{"m":int,"l":int,"k":int,"matrices":[[row-major f64...]...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CliffordSystemDoc {
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub matrices: Vec<Vec<f64>>,
}

impl From<&CliffordSystem> for CliffordSystemDoc {
    fn from(sys: &CliffordSystem) -> Self {
        Self {
            m: sys.m,
            l: sys.l,
            k: sys.k,
            matrices: sys.matrices.iter().map(|p| p.as_slice().to_vec()).collect(),
        }
    }
}

impl TryFrom<CliffordSystemDoc> for CliffordSystem {
    type Error = Error;

    fn try_from(doc: CliffordSystemDoc) -> Result<Self> {
        if doc.m == 0 || doc.l == 0 {
            return Err(Error::Validation("m and l must be positive".into()));
        }
        if doc.matrices.len() != doc.m + 1 {
            return Err(Error::Validation(format!(
                "expected {} matrices, found {}",
                doc.m + 1,
                doc.matrices.len()
            )));
        }
        let d = 2 * doc.l;
        let matrices = doc
            .matrices
            .into_iter()
            .map(|data| Matrix::from_row_major(d, d, data))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Validation(e.to_string()))?;
        // the skew generators sit in the upper-right blocks of P_2, …, P_m
        let generators = matrices[2.min(matrices.len())..]
            .iter()
            .map(|p| p.block(0, doc.l, doc.l, doc.l))
            .collect();
        let sys = CliffordSystem {
            m: doc.m,
            l: doc.l,
            k: doc.k,
            matrices,
            skew_source: SkewGeneratorSet {
                l: doc.l,
                generators,
            },
        };
        sys.validate()?;
        Ok(sys)
    }
}
