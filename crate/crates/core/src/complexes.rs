//! Every cochain complex in scope, built as explicit sparse differential
//! matrices: the Hochschild complex with bimodule coefficients, the
//! (relative) operator complex, the full and reduced mapping cones, and the
//! shifted labeled complex of an induced NS-algebra. Cohomology is exact
//! rank arithmetic; cocycle and coboundary queries come with witnesses.
//!
//! Matrix columns are images of basis cochains. A basis cochain of
//! `Hom(A^{(x)n}, M)` is a pair `(k0, t)` of a target index and a source
//! tuple; its column index is `k0 * d^n + flat(t)`, matching the flattening
//! convention of the `tensor` module. Every differential formula below is
//! applied to basis cochains directly, producing only the nonzero output
//! entries; the dense operations in `tensor`/`nsalg` serve as independent
//! cross-checks in the tests.

use crate::algebra::{Algebra, Bimodule, LinearMap, NijAlgebra, NijBimodule};
use crate::error::{EngineError, Result};
use crate::linalg::SparseMat;
use crate::nsalg::{encode_pi, induced_ns, labeled_space_dim, LabeledCochain, NSAlgebra};
use crate::scalar::{self, Scalar};
use crate::signs;
use crate::tensor::{flat_index, tuples, Arg, MultiMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    Hochschild,
    Operator,
    RelativeOperator,
    ConeFull,
    ConeReduced,
    NsShifted,
}

impl ComplexKind {
    pub fn name(self) -> &'static str {
        match self {
            ComplexKind::Hochschild => "hochschild",
            ComplexKind::Operator => "operator",
            ComplexKind::RelativeOperator => "relative-operator",
            ComplexKind::ConeFull => "cone-full",
            ComplexKind::ConeReduced => "cone-reduced",
            ComplexKind::NsShifted => "ns-shifted",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "hochschild" => ComplexKind::Hochschild,
            "operator" => ComplexKind::Operator,
            "relative-operator" => ComplexKind::RelativeOperator,
            "cone-full" => ComplexKind::ConeFull,
            "cone-reduced" => ComplexKind::ConeReduced,
            "ns-shifted" => ComplexKind::NsShifted,
            other => {
                return Err(EngineError::Usage(format!(
                    "unknown complex kind `{other}`"
                )))
            }
        })
    }
}

/// Degree cap for complex construction; the default keeps space dimensions
/// at desk scale.
#[derive(Clone, Copy, Debug)]
pub struct ComplexConfig {
    pub cap: usize,
}

impl Default for ComplexConfig {
    fn default() -> Self {
        ComplexConfig { cap: 4 }
    }
}

impl ComplexConfig {
    pub fn with_cap(cap: usize) -> Self {
        ComplexConfig { cap }
    }
}

/// A finite chunk of a cochain complex: space dimensions for degrees
/// `0..=n_max+1` and differentials `D_n : C^n -> C^{n+1}` for
/// `n = 0..=n_max`. `D_{n+1} D_n = 0` holds exactly for every stored pair;
/// builders assert it.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    kind: ComplexKind,
    n_max: usize,
    spaces: Vec<usize>,
    diffs: Vec<SparseMat>,
}

impl CochainComplex {
    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn max_degree(&self) -> usize {
        self.n_max
    }

    pub fn space_dim(&self, degree: usize) -> usize {
        self.spaces[degree]
    }

    /// `D_n : C^n -> C^{n+1}`.
    pub fn diff(&self, degree: usize) -> &SparseMat {
        &self.diffs[degree]
    }

    /// `D_{n+1} D_n = 0` for every adjacent stored pair.
    pub fn verify_dd_zero(&self) -> bool {
        (0..self.n_max).all(|n| self.diffs[n + 1].mul(&self.diffs[n]).is_zero())
    }

    /// Exact cocycle membership: `D_n v = 0`.
    pub fn is_cocycle(&self, degree: usize, v: &[Scalar]) -> Result<bool> {
        if degree > self.n_max {
            return Err(EngineError::DegreeCap {
                requested: degree,
                cap: self.n_max,
            });
        }
        if v.len() != self.spaces[degree] {
            return Err(EngineError::Dimension(format!(
                "cochain has {} entries, degree-{degree} space has dimension {}",
                v.len(),
                self.spaces[degree]
            )));
        }
        Ok(scalar::all_zero(&self.diffs[degree].mul_vec(v)))
    }

    /// For a cocycle `v` of the given degree, an exact preimage under
    /// `D_{n-1}` when one exists. Non-cocycles are rejected.
    pub fn coboundary_witness(&self, degree: usize, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if !self.is_cocycle(degree, v)? {
            return Err(EngineError::NotCocycle { degree });
        }
        if degree == 0 {
            return Ok(if scalar::all_zero(v) {
                Some(Vec::new())
            } else {
                None
            });
        }
        Ok(self.diffs[degree - 1].solve(v))
    }

    /// Basis of the degree-`n` cocycle space.
    pub fn kernel_basis(&self, degree: usize) -> Vec<Vec<Scalar>> {
        self.diffs[degree].nullspace()
    }

    /// Representatives of a basis of `H^degree`: kernel vectors extending a
    /// maximal independent set of the coboundaries.
    pub fn cohomology_representatives(&self, degree: usize) -> Vec<Vec<Scalar>> {
        let kernel = self.kernel_basis(degree);
        let image = if degree == 0 {
            SparseMat::zero(self.spaces[0], 0)
        } else {
            self.diffs[degree - 1].clone()
        };
        let mut reps = Vec::new();
        let mut span = image;
        let mut current_rank = span.rank();
        for k in kernel {
            let candidate = SparseMat::hstack(&[
                &span,
                &SparseMat::from_columns(self.spaces[degree], vec![k.clone()]),
            ]);
            let r = candidate.rank();
            if r > current_rank {
                reps.push(k);
                span = candidate;
                current_rank = r;
            }
        }
        reps
    }
}

/// Per-degree exact cohomology numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCohomology {
    pub degree: usize,
    pub dim: usize,
    pub rank: usize,
    pub nullity: usize,
    pub betti: usize,
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub kind: ComplexKind,
    pub fixture: String,
    pub degrees: Vec<DegreeCohomology>,
}

/// Betti numbers by exact rank: `H^n = nullity(D_n) - rank(D_{n-1})`.
pub fn cohomology(c: &CochainComplex) -> CohomologyReport {
    cohomology_labeled(c, c.kind.name())
}

pub fn cohomology_labeled(c: &CochainComplex, fixture: &str) -> CohomologyReport {
    let mut degrees = Vec::new();
    let mut prev_rank = 0usize;
    for n in 0..=c.n_max {
        let dim = c.spaces[n];
        let rank = c.diffs[n].rank();
        let nullity = dim - rank;
        let betti = nullity - prev_rank;
        degrees.push(DegreeCohomology {
            degree: n,
            dim,
            rank,
            nullity,
            betti,
        });
        prev_rank = rank;
    }
    CohomologyReport {
        kind: c.kind,
        fixture: fixture.to_string(),
        degrees,
    }
}

// ---------------------------------------------------------------------------
// Sparse basis-image machinery
// ---------------------------------------------------------------------------

type Entry = (usize, Scalar);

/// Shared precomputations for one (algebra, bimodule, operators) context.
struct Ctx {
    d: usize,
    m: usize,
    /// `(x, y, c)` with `mu[x][y][k] != 0`, indexed by `k`
    mu_by_target: Vec<Vec<(usize, usize, Scalar)>>,
    /// same for the deformed product `._N`
    mu_def_by_target: Vec<Vec<(usize, usize, Scalar)>>,
    /// row supports of `N`: for each `t`, the `(j, N[t][j])` with nonzero value
    n_row: Vec<Vec<Entry>>,
    /// column supports of `N_M`
    nm_col: Vec<Vec<Entry>>,
    /// column supports of the powers `N_M^s`, `s = 0..=max_power`
    nm_pow_col: Vec<Vec<Vec<Entry>>>,
    /// `left[j][k0] = N(e_j) |> e_k0`
    nleft: Vec<Vec<Vec<Scalar>>>,
    /// `nright[k0][j] = e_k0 <| N(e_j)`
    nright: Vec<Vec<Vec<Scalar>>>,
    /// plain action slices
    left: Vec<Vec<Vec<Scalar>>>,
    right: Vec<Vec<Vec<Scalar>>>,
}

impl Ctx {
    fn new(na: &NijAlgebra, b: &Bimodule, nm: &LinearMap, max_power: usize) -> Ctx {
        let a = na.algebra();
        let d = a.dim();
        let m = b.dim();
        let n = na.operator();
        let by_target = |tensor: &Algebra| -> Vec<Vec<(usize, usize, Scalar)>> {
            let mut out = vec![Vec::new(); d];
            for x in 0..d {
                for y in 0..d {
                    for (k, v) in tensor.product_basis(x, y).iter().enumerate() {
                        if !scalar::is_zero(v) {
                            out[k].push((x, y, v.clone()));
                        }
                    }
                }
            }
            out
        };
        let mu_by_target = by_target(a);
        let deformed = crate::algebra::deformed_algebra(na, 1);
        let mu_def_by_target = by_target(&deformed);
        let mut n_row = vec![Vec::new(); d];
        for t in 0..d {
            for j in 0..d {
                if !scalar::is_zero(n.entry(t, j)) {
                    n_row[t].push((j, n.entry(t, j).clone()));
                }
            }
        }
        let mut nm_col = vec![Vec::new(); m];
        for v in 0..m {
            for w in 0..m {
                if !scalar::is_zero(nm.entry(w, v)) {
                    nm_col[v].push((w, nm.entry(w, v).clone()));
                }
            }
        }
        let mut nm_pow_col = Vec::with_capacity(max_power + 1);
        for s in 0..=max_power {
            let p = nm.pow(s as u32);
            let mut cols = vec![Vec::new(); m];
            for k in 0..m {
                for w in 0..m {
                    if !scalar::is_zero(p.entry(w, k)) {
                        cols[k].push((w, p.entry(w, k).clone()));
                    }
                }
            }
            nm_pow_col.push(cols);
        }
        let mut nleft = vec![vec![Vec::new(); m]; d];
        let mut nright = vec![vec![Vec::new(); d]; m];
        let mut left = vec![vec![Vec::new(); m]; d];
        let mut right = vec![vec![Vec::new(); d]; m];
        for j in 0..d {
            let nj = n.column(j);
            for k0 in 0..m {
                let ek = b.module_basis_vector(k0);
                nleft[j][k0] = b.act_left(&nj, &ek);
                nright[k0][j] = b.act_right(&ek, &nj);
                left[j][k0] = b.left_basis(j, k0).to_vec();
                right[k0][j] = b.right_basis(k0, j).to_vec();
            }
        }
        Ctx {
            d,
            m,
            mu_by_target,
            mu_def_by_target,
            n_row,
            nm_col,
            nm_pow_col,
            nleft,
            nright,
            left,
            right,
        }
    }

    /// Image of the basis cochain `(k0, t)` of arity `n` under the
    /// Hochschild coboundary; entries indexed `v * d^{n+1} + flat`.
    fn hochschild_image(&self, n: usize, k0: usize, t: &[usize]) -> Vec<Entry> {
        let d = self.d;
        let out_block = d.pow((n + 1) as u32);
        let mut out = Vec::new();
        if n == 0 {
            for j in 0..d {
                for v in 0..self.m {
                    let val = &self.left[j][k0][v] - &self.right[k0][j][v];
                    if !scalar::is_zero(&val) {
                        out.push((v * out_block + j, val));
                    }
                }
            }
            return out;
        }
        let flat_t = flat_index(d, t);
        // a_1 |> f(a_2, ..., a_{n+1})
        for j in 0..d {
            let base = j * d.pow(n as u32) + flat_t;
            for (v, val) in self.left[j][k0].iter().enumerate() {
                if !scalar::is_zero(val) {
                    out.push((v * out_block + base, val.clone()));
                }
            }
        }
        // interior terms through the multiplication
        for i in 1..=n {
            let sign = signs::hochschild_interior(i);
            for (x, y, c) in &self.mu_by_target[t[i - 1]] {
                let mut tup = Vec::with_capacity(n + 1);
                tup.extend_from_slice(&t[..i - 1]);
                tup.push(*x);
                tup.push(*y);
                tup.extend_from_slice(&t[i..]);
                out.push((k0 * out_block + flat_index(d, &tup), c * &sign));
            }
        }
        // f(a_1, ..., a_n) <| a_{n+1}
        let sign = signs::hochschild_last(n);
        for j in 0..d {
            let base = flat_t * d + j;
            for (v, val) in self.right[k0][j].iter().enumerate() {
                if !scalar::is_zero(val) {
                    out.push((v * out_block + base, val * &sign));
                }
            }
        }
        out
    }

    /// Image of `(k0, t)` under `d_{N, N_M}`.
    fn relative_image(&self, n: usize, k0: usize, t: &[usize]) -> Vec<Entry> {
        let d = self.d;
        let out_block = d.pow((n + 1) as u32);
        let mut out = Vec::new();
        if n == 0 {
            // N(a) |> u - u <| N(a) - N_M(a |> u - u <| a)
            for j in 0..d {
                for v in 0..self.m {
                    let val = &self.nleft[j][k0][v] - &self.nright[k0][j][v];
                    if !scalar::is_zero(&val) {
                        out.push((v * out_block + j, val));
                    }
                }
                for v0 in 0..self.m {
                    let h = &self.left[j][k0][v0] - &self.right[k0][j][v0];
                    if scalar::is_zero(&h) {
                        continue;
                    }
                    for (w, nv) in &self.nm_col[v0] {
                        out.push((w * out_block + j, -(&h * nv)));
                    }
                }
            }
            return out;
        }
        let flat_t = flat_index(d, t);
        // N(a_1) |> f(...)
        for j in 0..d {
            let base = j * d.pow(n as u32) + flat_t;
            for (v, val) in self.nleft[j][k0].iter().enumerate() {
                if !scalar::is_zero(val) {
                    out.push((v * out_block + base, val.clone()));
                }
            }
        }
        // -(-1)^n f(...) <| N(a_{n+1})
        let last_sign = signs::operator_last(n);
        for j in 0..d {
            let base = flat_t * d + j;
            for (v, val) in self.nright[k0][j].iter().enumerate() {
                if !scalar::is_zero(val) {
                    out.push((v * out_block + base, val * &last_sign));
                }
            }
        }
        // interior terms through the deformed product
        for i in 1..=n {
            let sign = signs::hochschild_interior(i);
            for (x, y, c) in &self.mu_def_by_target[t[i - 1]] {
                let mut tup = Vec::with_capacity(n + 1);
                tup.extend_from_slice(&t[..i - 1]);
                tup.push(*x);
                tup.push(*y);
                tup.extend_from_slice(&t[i..]);
                out.push((k0 * out_block + flat_index(d, &tup), c * &sign));
            }
        }
        // - N_M (hochschild terms)
        for (idx, val) in self.hochschild_image(n, k0, t) {
            let v = idx / out_block;
            let flat = idx % out_block;
            for (w, nv) in &self.nm_col[v] {
                out.push((w * out_block + flat, -(&val * nv)));
            }
        }
        out
    }

    /// Image of `(k0, t)` under `partial^{N, N_M}` (arity preserved).
    fn partial_image(&self, n: usize, k0: usize, t: &[usize]) -> Vec<Entry> {
        if n == 0 {
            return vec![(k0, scalar::one())];
        }
        let d = self.d;
        let out_block = d.pow(n as u32);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let plain = mask.count_ones() as usize;
            let sign = signs::partial_subset(plain);
            // enumerate decorated positions over the row support of N
            let mut assignments: Vec<(usize, Scalar)> = vec![(0, sign)];
            let mut dead = false;
            for (pos, &ti) in t.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    for a in assignments.iter_mut() {
                        a.0 = a.0 * d + ti;
                    }
                } else {
                    let support = &self.n_row[ti];
                    if support.is_empty() {
                        dead = true;
                        break;
                    }
                    let mut next = Vec::with_capacity(assignments.len() * support.len());
                    for (flat, coef) in &assignments {
                        for (j, nv) in support {
                            next.push((flat * d + j, coef * nv));
                        }
                    }
                    assignments = next;
                }
            }
            if dead {
                continue;
            }
            for (flat, coef) in assignments {
                for (w, pv) in &self.nm_pow_col[plain][k0] {
                    out.push((w * out_block + flat, &coef * pv));
                }
            }
        }
        out
    }
}

fn module_cochain_dim(d: usize, m: usize, n: usize) -> usize {
    m * d.pow(n as u32)
}

/// Assemble a matrix whose columns are images of the arity-`n` basis
/// cochains of `Hom(A^{(x)n}, M)`.
fn assemble(
    rows: usize,
    d: usize,
    m: usize,
    n: usize,
    image: impl Fn(usize, &[usize]) -> Vec<Entry>,
) -> SparseMat {
    let cols = module_cochain_dim(d, m, n);
    let block = d.pow(n as u32);
    let mut triplets = Vec::new();
    for k0 in 0..m {
        for (flat, t) in tuples(d, n).enumerate() {
            let col = k0 * block + flat;
            for (row, val) in image(k0, &t) {
                triplets.push((row, col, val));
            }
        }
    }
    SparseMat::from_triplets(rows, cols, triplets)
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

fn check_degree(n_max: usize, cfg: &ComplexConfig) -> Result<()> {
    if n_max < 1 || n_max > cfg.cap {
        return Err(EngineError::DegreeCap {
            requested: n_max,
            cap: cfg.cap,
        });
    }
    Ok(())
}

/// Hochschild complex of the algebra with coefficients in the bimodule.
pub fn hochschild_complex(
    a: &Algebra,
    b: &Bimodule,
    n_max: usize,
    cfg: &ComplexConfig,
) -> Result<CochainComplex> {
    check_degree(n_max, cfg)?;
    // operators are irrelevant here; a zero operator context reuses the
    // shared machinery
    let na = NijAlgebra::from_parts(a.clone(), LinearMap::zero(a.dim(), a.dim()))?;
    let ctx = Ctx::new(&na, b, &LinearMap::zero(b.dim(), b.dim()), 0);
    let (d, m) = (ctx.d, ctx.m);
    let spaces: Vec<usize> = (0..=n_max + 1).map(|n| module_cochain_dim(d, m, n)).collect();
    let diffs: Vec<SparseMat> = (0..=n_max)
        .map(|n| {
            assemble(spaces[n + 1], d, m, n, |k0, t| ctx.hochschild_image(n, k0, t))
        })
        .collect();
    let c = CochainComplex {
        kind: ComplexKind::Hochschild,
        n_max,
        spaces,
        diffs,
    };
    assert!(c.verify_dd_zero(), "hochschild differential must square to zero");
    Ok(c)
}

/// Cochain complex of the Nijenhuis operator `N` relative to `N_M`.
pub fn relative_operator_complex(
    na: &NijAlgebra,
    nb: &NijBimodule,
    n_max: usize,
    cfg: &ComplexConfig,
) -> Result<CochainComplex> {
    check_degree(n_max, cfg)?;
    let ctx = Ctx::new(na, nb.bimodule(), nb.operator(), n_max + 1);
    let (d, m) = (ctx.d, ctx.m);
    let spaces: Vec<usize> = (0..=n_max + 1).map(|n| module_cochain_dim(d, m, n)).collect();
    let diffs: Vec<SparseMat> = (0..=n_max)
        .map(|n| assemble(spaces[n + 1], d, m, n, |k0, t| ctx.relative_image(n, k0, t)))
        .collect();
    let c = CochainComplex {
        kind: ComplexKind::RelativeOperator,
        n_max,
        spaces,
        diffs,
    };
    assert!(c.verify_dd_zero(), "relative differential must square to zero");
    Ok(c)
}

/// Cochain complex of the Nijenhuis operator itself (adjoint coefficients).
pub fn operator_complex(na: &NijAlgebra, n_max: usize, cfg: &ComplexConfig) -> Result<CochainComplex> {
    let nb = NijBimodule::adjoint(na);
    let mut c = relative_operator_complex(na, &nb, n_max, cfg)?;
    c.kind = ComplexKind::Operator;
    Ok(c)
}

fn cone_spaces(d: usize, m: usize, n_max: usize, reduced: bool) -> Vec<usize> {
    (0..=n_max + 1)
        .map(|n| {
            if n == 0 {
                if reduced {
                    0
                } else {
                    m
                }
            } else if n == 1 {
                if reduced {
                    module_cochain_dim(d, m, 1)
                } else {
                    module_cochain_dim(d, m, 1) + m
                }
            } else {
                module_cochain_dim(d, m, n) + module_cochain_dim(d, m, n - 1)
            }
        })
        .collect()
}

fn cone_complex(
    na: &NijAlgebra,
    nb: &NijBimodule,
    n_max: usize,
    cfg: &ComplexConfig,
    reduced: bool,
) -> Result<CochainComplex> {
    check_degree(n_max, cfg)?;
    let ctx = Ctx::new(na, nb.bimodule(), nb.operator(), n_max + 1);
    let (d, m) = (ctx.d, ctx.m);
    let spaces = cone_spaces(d, m, n_max, reduced);
    let mut diffs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let rows = spaces[n + 1];
        let cols = spaces[n];
        let chi_rows = module_cochain_dim(d, m, n + 1);
        let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
        if n == 0 {
            if !reduced {
                // u -> (delta_Hoch u, u)
                for k0 in 0..m {
                    for (row, val) in ctx.hochschild_image(0, k0, &[]) {
                        triplets.push((row, k0, val));
                    }
                    triplets.push((chi_rows + k0, k0, scalar::one()));
                }
            }
            diffs.push(SparseMat::from_triplets(rows, cols, triplets));
            continue;
        }
        // chi columns: (delta_Hoch chi, (-1)^n partial chi)
        let chi_block = d.pow(n as u32);
        let cone_sign = signs::cone_partial(n);
        for k0 in 0..m {
            for (flat, t) in tuples(d, n).enumerate() {
                let col = k0 * chi_block + flat;
                for (row, val) in ctx.hochschild_image(n, k0, &t) {
                    triplets.push((row, col, val));
                }
                for (row, val) in ctx.partial_image(n, k0, &t) {
                    triplets.push((chi_rows + row, col, val * &cone_sign));
                }
            }
        }
        // F columns: d_{N,N_M} F into the F block
        let chi_cols = module_cochain_dim(d, m, n);
        let has_f_part = if reduced { n >= 2 } else { true };
        if has_f_part {
            let f_arity = n - 1;
            let f_block = d.pow(f_arity as u32);
            for k0 in 0..m {
                for (flat, t) in tuples(d, f_arity).enumerate() {
                    let col = chi_cols + k0 * f_block + flat;
                    for (row, val) in ctx.relative_image(f_arity, k0, &t) {
                        triplets.push((chi_rows + row, col, val));
                    }
                }
            }
        }
        diffs.push(SparseMat::from_triplets(rows, cols, triplets));
    }
    let c = CochainComplex {
        kind: if reduced {
            ComplexKind::ConeReduced
        } else {
            ComplexKind::ConeFull
        },
        n_max,
        spaces,
        diffs,
    };
    assert!(c.verify_dd_zero(), "cone differential must square to zero");
    Ok(c)
}

/// Full mapping cone of `partial^{N,N_M}`, the complex of the pair.
pub fn cone_full_complex(
    na: &NijAlgebra,
    nb: &NijBimodule,
    n_max: usize,
    cfg: &ComplexConfig,
) -> Result<CochainComplex> {
    cone_complex(na, nb, n_max, cfg, false)
}

/// Reduced cone: `C^0 = 0`, `C^1 = Hom(A, M)`; the cochain complex of the
/// Nijenhuis algebra with coefficients in the Nijenhuis bimodule.
pub fn cone_reduced_complex(
    na: &NijAlgebra,
    nb: &NijBimodule,
    n_max: usize,
    cfg: &ComplexConfig,
) -> Result<CochainComplex> {
    cone_complex(na, nb, n_max, cfg, true)
}

// ---------------------------------------------------------------------------
// NS-shifted complex
// ---------------------------------------------------------------------------

struct NsCtx {
    d: usize,
    prec: Vec<Scalar>,
    succ: Vec<Scalar>,
    curly: Vec<Scalar>,
    /// `(x, y, val)` with `tensor[x][y][k] != 0`, per tensor, indexed by k
    prec_by_target: Vec<Vec<(usize, usize, Scalar)>>,
    succ_by_target: Vec<Vec<(usize, usize, Scalar)>>,
    curly_by_target: Vec<Vec<(usize, usize, Scalar)>>,
    total_by_target: Vec<Vec<(usize, usize, Scalar)>>,
}

impl NsCtx {
    fn new(ns: &NSAlgebra) -> NsCtx {
        let d = ns.dim();
        let by_target = |t: &[Scalar]| {
            let mut out = vec![Vec::new(); d];
            for x in 0..d {
                for y in 0..d {
                    for k in 0..d {
                        let v = &t[(x * d + y) * d + k];
                        if !scalar::is_zero(v) {
                            out[k].push((x, y, v.clone()));
                        }
                    }
                }
            }
            out
        };
        let prec = ns.prec_tensor().to_vec();
        let succ = ns.succ_tensor().to_vec();
        let curly = ns.curly_tensor().to_vec();
        let total = ns.total_tensor();
        NsCtx {
            d,
            prec_by_target: by_target(&prec),
            succ_by_target: by_target(&succ),
            curly_by_target: by_target(&curly),
            total_by_target: by_target(&total),
            prec,
            succ,
            curly,
        }
    }

    fn slice<'a>(&self, t: &'a [Scalar], i: usize, j: usize) -> &'a [Scalar] {
        let base = (i * self.d + j) * self.d;
        &t[base..base + self.d]
    }

    /// Image of the labeled basis cochain `(r0, k0, t)` of arity `n >= 1`
    /// under `delta_pi`. Output indices follow the label-major layout
    /// `((r-1) d + v) d^{n+1} + flat`.
    fn ns_delta_image(&self, n: usize, r0: usize, k0: usize, t: &[usize]) -> Vec<Entry> {
        let d = self.d;
        let out_arity = n + 1;
        let out_block = d.pow(out_arity as u32);
        let flat_t = flat_index(d, t);
        let g_components = if n == 1 { 1 } else { n + 1 };
        let mut out: Vec<Entry> = Vec::new();
        let mut push = |r: usize, flat: usize, slice: &[Scalar], coef: &Scalar| {
            for (v, val) in slice.iter().enumerate() {
                if !scalar::is_zero(val) {
                    out.push((((r - 1) * d + v) * out_block + flat, val * coef));
                }
            }
        };

        // pi o_1 g, coefficient (+1)
        let c1 = signs::ns_bracket_first(1, n);
        for j in 0..d {
            let flat = flat_t * d + j;
            if r0 <= n {
                // out label r0: pi([1]; g([r0]; ...), a)
                push(r0, flat, self.slice(&self.prec, k0, j), &c1);
            }
            // out label n+1: pi([2]; g_total, a)
            push(n + 1, flat, self.slice(&self.succ, k0, j), &c1);
            // out label n+2
            if r0 == n + 1 && g_components > n {
                push(n + 2, flat, self.slice(&self.prec, k0, j), &c1);
            }
            push(n + 2, flat, self.slice(&self.curly, k0, j), &c1);
        }

        // pi o_2 g, coefficient (-1)^{n-1}
        let c2 = signs::ns_bracket_first(2, n);
        for j in 0..d {
            let flat = j * d.pow(n as u32) + flat_t;
            // out label 1: pi([1]; a, g_total)
            push(1, flat, self.slice(&self.prec, j, k0), &c2);
            // out label r0+1: pi([2]; a, g([r0]; ...))
            if r0 <= n {
                push(r0 + 1, flat, self.slice(&self.succ, j, k0), &c2);
            }
            if r0 == n + 1 && g_components > n {
                push(n + 2, flat, self.slice(&self.succ, j, k0), &c2);
            }
            push(n + 2, flat, self.slice(&self.curly, j, k0), &c2);
        }

        // - (-1)^{(2-1)(n-1)} sum_i (-1)^{(i-1)(2-1)} g o_i pi
        let flip = signs::ns_bracket_flip(2, n);
        for i in 1..=n {
            let coef = &flip * signs::ns_bracket_second(i, 2);
            let ti = t[i - 1];
            let tuple_with = |x: usize, y: usize| -> usize {
                let mut tup = Vec::with_capacity(n + 1);
                tup.extend_from_slice(&t[..i - 1]);
                tup.push(x);
                tup.push(y);
                tup.extend_from_slice(&t[i..]);
                flat_index(d, &tup)
            };
            // case r <= i-1 and case i+2 <= r <= n+1: g([r0]; ..., pi_total, ...)
            if r0 <= i - 1 {
                for (x, y, val) in &self.total_by_target[ti] {
                    let flat = tuple_with(*x, *y);
                    out.push((((r0 - 1) * d + k0) * out_block + flat, val * &coef));
                }
            }
            if r0 >= i + 1 && r0 <= n {
                for (x, y, val) in &self.total_by_target[ti] {
                    let flat = tuple_with(*x, *y);
                    out.push((((r0 + 1 - 1) * d + k0) * out_block + flat, val * &coef));
                }
            }
            // case r in {i, i+1}: g([i]; ..., pi([1 or 2]); ...)
            if r0 == i {
                for (x, y, val) in &self.prec_by_target[ti] {
                    let flat = tuple_with(*x, *y);
                    out.push((((i - 1) * d + k0) * out_block + flat, val * &coef));
                }
                for (x, y, val) in &self.succ_by_target[ti] {
                    let flat = tuple_with(*x, *y);
                    out.push((((i + 1 - 1) * d + k0) * out_block + flat, val * &coef));
                }
                // r = n+2, first summand: g([i]; ..., pi([3]), ...)
                for (x, y, val) in &self.curly_by_target[ti] {
                    let flat = tuple_with(*x, *y);
                    out.push((((n + 2 - 1) * d + k0) * out_block + flat, val * &coef));
                }
            }
            // r = n+2, second summand: g([m+1] = [n+1]; ..., pi_total, ...)
            if r0 == n + 1 && g_components > n {
                for (x, y, val) in &self.total_by_target[ti] {
                    let flat = tuple_with(*x, *y);
                    out.push((((n + 2 - 1) * d + k0) * out_block + flat, val * &coef));
                }
            }
        }

        let outer = signs::ns_differential(n);
        out.into_iter().map(|(i, v)| (i, v * &outer)).collect()
    }
}

/// Shifted labeled complex `{ O_A(n), delta_pi }` of the NS-algebra induced
/// by the Nijenhuis operator. Degree 0 is the zero space.
pub fn ns_shifted_complex(na: &NijAlgebra, n_max: usize, cfg: &ComplexConfig) -> Result<CochainComplex> {
    check_degree(n_max, cfg)?;
    let ns = induced_ns(na);
    let ctx = NsCtx::new(&ns);
    let d = ctx.d;
    let spaces: Vec<usize> = (0..=n_max + 1)
        .map(|n| if n == 0 { 0 } else { labeled_space_dim(d, n) })
        .collect();
    let mut diffs = Vec::with_capacity(n_max + 1);
    diffs.push(SparseMat::zero(spaces[1], 0));
    for n in 1..=n_max {
        let rows = spaces[n + 1];
        let cols = spaces[n];
        let comp_count = if n == 1 { 1 } else { n + 1 };
        let block = d.pow(n as u32);
        let mut triplets = Vec::new();
        for r0 in 1..=comp_count {
            for k0 in 0..d {
                for (flat, t) in tuples(d, n).enumerate() {
                    let col = ((r0 - 1) * d + k0) * block + flat;
                    for (row, val) in ctx.ns_delta_image(n, r0, k0, &t) {
                        triplets.push((row, col, val));
                    }
                }
            }
        }
        diffs.push(SparseMat::from_triplets(rows, cols, triplets));
    }
    let c = CochainComplex {
        kind: ComplexKind::NsShifted,
        n_max,
        spaces,
        diffs,
    };
    assert!(c.verify_dd_zero(), "delta_pi must square to zero");
    Ok(c)
}

/// Unified builder, dispatching on kind; the bimodule defaults to the
/// adjoint one when omitted.
pub fn build_complex(
    kind: ComplexKind,
    na: &NijAlgebra,
    nb: Option<&NijBimodule>,
    n_max: usize,
    cfg: &ComplexConfig,
) -> Result<CochainComplex> {
    let adjoint;
    let nb = match nb {
        Some(nb) => nb,
        None => {
            adjoint = NijBimodule::adjoint(na);
            &adjoint
        }
    };
    match kind {
        ComplexKind::Hochschild => hochschild_complex(na.algebra(), nb.bimodule(), n_max, cfg),
        ComplexKind::Operator => operator_complex(na, n_max, cfg),
        ComplexKind::RelativeOperator => relative_operator_complex(na, nb, n_max, cfg),
        ComplexKind::ConeFull => cone_full_complex(na, nb, n_max, cfg),
        ComplexKind::ConeReduced => cone_reduced_complex(na, nb, n_max, cfg),
        ComplexKind::NsShifted => ns_shifted_complex(na, n_max, cfg),
    }
}

// ---------------------------------------------------------------------------
// The relative comparison map and dense partial operation
// ---------------------------------------------------------------------------

/// Dense `partial^{N, N_M}` on a multimap: the alternating sum over subsets
/// of undecorated argument positions. Arity-0 elements map to themselves.
pub fn partial_map(na: &NijAlgebra, nb: &NijBimodule, f: &MultiMap) -> Result<MultiMap> {
    if nb.nij_algebra() != na {
        return Err(EngineError::Structure(
            "bimodule is not over the given Nijenhuis algebra".into(),
        ));
    }
    if f.source_dim() != na.dim() || f.target_dim() != nb.dim() {
        return Err(EngineError::Dimension(
            "partial map wants a cochain from the algebra into the module".into(),
        ));
    }
    let n = f.arity();
    if n == 0 {
        return Ok(f.clone());
    }
    let d = na.dim();
    let n_op = na.operator();
    let nm_pows: Vec<LinearMap> = (0..=n).map(|s| nb.operator().pow(s as u32)).collect();
    let n_cols: Vec<Vec<Scalar>> = (0..d).map(|j| n_op.column(j)).collect();
    Ok(MultiMap::from_fn(n, d, nb.dim(), |t: &[usize]| {
        let mut acc = vec![scalar::zero(); nb.dim()];
        for mask in 0u32..(1 << n) {
            let plain = mask.count_ones() as usize;
            let args: Vec<Arg> = t
                .iter()
                .enumerate()
                .map(|(pos, &ti)| {
                    if mask & (1 << pos) != 0 {
                        Arg::Basis(ti)
                    } else {
                        Arg::Vector(&n_cols[ti])
                    }
                })
                .collect();
            let val = nm_pows[plain].apply(&f.eval_args(&args));
            let sign = signs::partial_subset(plain);
            for (x, v) in acc.iter_mut().zip(val) {
                *x += v * &sign;
            }
        }
        acc
    }))
}

// ---------------------------------------------------------------------------
// Long exact sequence
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct LesNode {
    pub degree: usize,
    pub dim_h_rel_prev: usize,
    pub dim_h_cone: usize,
    pub dim_h_hoch: usize,
    pub dim_h_rel: usize,
    pub rank_incl: usize,
    pub rank_proj: usize,
    pub rank_conn: usize,
    pub rank_incl_next: usize,
    pub exact_at_cone: bool,
    pub exact_at_hoch: bool,
    pub exact_at_rel: bool,
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub nodes: Vec<LesNode>,
    pub exact: bool,
    /// Construction note: the induced maps on cohomology are computed by the
    /// standard zig-zag on explicit representatives, an engine choice.
    pub note: &'static str,
}

/// Rank of the map induced on cohomology by a chain-level map `phi`, from
/// kernel representatives at the source to the quotient by the image at the
/// target: `rank([phi K | B]) - rank(B)`.
fn induced_rank(phi: &SparseMat, src_kernel: &[Vec<Scalar>], tgt_image: &SparseMat) -> usize {
    if src_kernel.is_empty() {
        return 0;
    }
    let mapped: Vec<Vec<Scalar>> = src_kernel.iter().map(|k| phi.mul_vec(k)).collect();
    let mapped_mat = SparseMat::from_columns(phi.rows(), mapped);
    let stacked = SparseMat::hstack(&[&mapped_mat, tgt_image]);
    stacked.rank() - tgt_image.rank()
}

/// Exactness of the long exact sequence
/// `... -> H^{n-1}(N;N_M) -> H^n_{cone} -> H^n_{Hoch} -> H^n(N;N_M) -> ...`
/// by exact dimension counts at every node with degree `n <= n_max - 1`.
pub fn les_report(
    na: &NijAlgebra,
    nb: &NijBimodule,
    n_max: usize,
    cfg: &ComplexConfig,
) -> Result<LesReport> {
    let hoch = hochschild_complex(na.algebra(), nb.bimodule(), n_max, cfg)?;
    let rel = relative_operator_complex(na, nb, n_max, cfg)?;
    let cone = cone_full_complex(na, nb, n_max, cfg)?;
    let d = na.dim();
    let m = nb.dim();
    let hoch_coh = cohomology(&hoch);
    let rel_coh = cohomology(&rel);
    let cone_coh = cohomology(&cone);
    let ctx = Ctx::new(na, nb.bimodule(), nb.operator(), n_max + 1);

    // chain-level maps
    let incl_mat = |n: usize| -> SparseMat {
        // i : C^{n-1}(N;N_M) -> Cone^n, F -> (0, F)
        let cols = module_cochain_dim(d, m, n - 1);
        let chi_rows = module_cochain_dim(d, m, n);
        SparseMat::from_triplets(
            cone.space_dim(n),
            cols,
            (0..cols).map(|j| (chi_rows + j, j, scalar::one())),
        )
    };
    let proj_mat = |n: usize| -> SparseMat {
        // p : Cone^n -> C^n_Hoch, (chi, F) -> chi
        let chi_cols = module_cochain_dim(d, m, n);
        SparseMat::from_triplets(
            chi_cols,
            cone.space_dim(n),
            (0..chi_cols).map(|j| (j, j, scalar::one())),
        )
    };
    let conn_mat = |n: usize| -> SparseMat {
        // zig-zag connecting map: chi -> (-1)^n partial(chi)
        let sign = signs::cone_partial(n);
        let block = d.pow(n as u32);
        let mut triplets = Vec::new();
        for k0 in 0..m {
            for (flat, t) in tuples(d, n).enumerate() {
                let col = k0 * block + flat;
                for (row, val) in ctx.partial_image(n, k0, &t) {
                    triplets.push((row, col, val * &sign));
                }
            }
        }
        SparseMat::from_triplets(rel.space_dim(n), module_cochain_dim(d, m, n), triplets)
    };

    let image_of = |c: &CochainComplex, n: usize| -> SparseMat {
        if n == 0 {
            SparseMat::zero(c.space_dim(0), 0)
        } else {
            c.diff(n - 1).clone()
        }
    };

    let mut nodes = Vec::new();
    let mut exact = true;
    for n in 0..n_max {
        let dim_h_rel_prev = if n == 0 {
            0
        } else {
            rel_coh.degrees[n - 1].betti
        };
        let dim_h_cone = cone_coh.degrees[n].betti;
        let dim_h_hoch = hoch_coh.degrees[n].betti;
        let dim_h_rel = rel_coh.degrees[n].betti;

        let rank_incl = if n == 0 {
            0
        } else {
            induced_rank(&incl_mat(n), &rel.kernel_basis(n - 1), &image_of(&cone, n))
        };
        let rank_proj = induced_rank(&proj_mat(n), &cone.kernel_basis(n), &image_of(&hoch, n));
        let rank_conn = induced_rank(&conn_mat(n), &hoch.kernel_basis(n), &image_of(&rel, n));
        let rank_incl_next =
            induced_rank(&incl_mat(n + 1), &rel.kernel_basis(n), &image_of(&cone, n + 1));

        let exact_at_cone = rank_incl == dim_h_cone - rank_proj;
        let exact_at_hoch = rank_proj == dim_h_hoch - rank_conn;
        let exact_at_rel = rank_conn == dim_h_rel - rank_incl_next;
        exact &= exact_at_cone && exact_at_hoch && exact_at_rel;
        nodes.push(LesNode {
            degree: n,
            dim_h_rel_prev,
            dim_h_cone,
            dim_h_hoch,
            dim_h_rel,
            rank_incl,
            rank_proj,
            rank_conn,
            rank_incl_next,
            exact_at_cone,
            exact_at_hoch,
            exact_at_rel,
        });
    }
    Ok(LesReport {
        nodes,
        exact,
        note: "induced maps computed by the standard zig-zag on explicit representatives",
    })
}

// ---------------------------------------------------------------------------
// Cone vector packing
// ---------------------------------------------------------------------------

/// Split a cone cochain vector of the given degree into its `(chi, F)`
/// parts. The reduced cone has no `F` part at degree 1 and no degree 0.
pub fn cone_split(
    d: usize,
    m: usize,
    degree: usize,
    v: &[Scalar],
    reduced: bool,
) -> Result<(MultiMap, Option<MultiMap>)> {
    let chi_dim = module_cochain_dim(d, m, degree);
    if degree == 0 {
        if reduced {
            return Err(EngineError::Structure("the reduced cone has no degree 0".into()));
        }
        let chi = MultiMap::from_vector(0, d, m, v.to_vec())?;
        return Ok((chi, None));
    }
    let has_f = !reduced || degree >= 2;
    let want = chi_dim + if has_f { module_cochain_dim(d, m, degree - 1) } else { 0 };
    if v.len() != want {
        return Err(EngineError::Dimension(format!(
            "cone cochain has {} entries, expected {want}",
            v.len()
        )));
    }
    let chi = MultiMap::from_vector(degree, d, m, v[..chi_dim].to_vec())?;
    let f = if has_f {
        Some(MultiMap::from_vector(
            degree - 1,
            d,
            m,
            v[chi_dim..].to_vec(),
        )?)
    } else {
        None
    };
    Ok((chi, f))
}

/// Inverse of [`cone_split`].
pub fn cone_join(chi: &MultiMap, f: Option<&MultiMap>) -> Vec<Scalar> {
    let mut v = chi.as_vector().to_vec();
    if let Some(f) = f {
        v.extend_from_slice(f.as_vector());
    }
    v
}

/// Flatten a labeled cochain into the ns-shifted complex layout.
pub fn labeled_to_vector(f: &LabeledCochain) -> Vec<Scalar> {
    f.as_vector()
}

/// The encoded Maurer-Cartan element of the induced NS-algebra, for tests
/// and reports.
pub fn induced_pi(na: &NijAlgebra) -> LabeledCochain {
    encode_pi(&induced_ns(na))
}
