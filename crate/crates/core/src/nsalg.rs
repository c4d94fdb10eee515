//! NS-algebras, the labeled cochain spaces `O_A(n)`, their partial
//! compositions and graded Lie bracket, the induced differential, and the
//! comparison maps from the cochain complex of a Nijenhuis operator.
//!
//! Labels are stored 1-based to match the `[r]` symbols; all basis indices
//! are 0-based. `O_A(1)` has a single component; `O_A(n >= 2)` has `n + 1`.
//! Evaluating a missing label (e.g. `[2]` on an arity-1 cochain) gives zero.

use crate::algebra::{deformed_algebra, Algebra, LawChecker, NijAlgebra, Report};
use crate::error::{EngineError, Result};
use crate::scalar::{self, Scalar};
use crate::signs;
use crate::tensor::{hochschild_delta_adjoint, Arg, MultiMap};

/// Three bilinear products subject to the four NS identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSAlgebra {
    dim: usize,
    prec: Vec<Scalar>,
    succ: Vec<Scalar>,
    curly: Vec<Scalar>,
}

/// Verification outcome for an NS-algebra, with the dendriform flag
/// (`curly = 0`) reported alongside.
#[derive(Clone, Debug)]
pub struct NsReport {
    pub report: Report,
    pub dendriform: bool,
}

impl NSAlgebra {
    pub fn from_parts(dim: usize, prec: Vec<Scalar>, succ: Vec<Scalar>, curly: Vec<Scalar>) -> Result<Self> {
        let want = dim * dim * dim;
        for (name, t) in [("prec", &prec), ("succ", &succ), ("curly", &curly)] {
            if t.len() != want {
                return Err(EngineError::Dimension(format!(
                    "{name} tensor has {} entries, expected {want}",
                    t.len()
                )));
            }
        }
        Ok(NSAlgebra {
            dim,
            prec,
            succ,
            curly,
        })
    }

    pub fn new(dim: usize, prec: Vec<Scalar>, succ: Vec<Scalar>, curly: Vec<Scalar>) -> Result<Self> {
        let ns = NSAlgebra::from_parts(dim, prec, succ, curly)?;
        let v = verify_ns(&ns);
        if !v.report.ok {
            return Err(EngineError::invalid("NS-algebra", v.report));
        }
        Ok(ns)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slice(t: &[Scalar], d: usize, i: usize, j: usize) -> &[Scalar] {
        let base = (i * d + j) * d;
        &t[base..base + d]
    }

    pub fn prec_basis(&self, i: usize, j: usize) -> &[Scalar] {
        Self::slice(&self.prec, self.dim, i, j)
    }

    pub fn succ_basis(&self, i: usize, j: usize) -> &[Scalar] {
        Self::slice(&self.succ, self.dim, i, j)
    }

    pub fn curly_basis(&self, i: usize, j: usize) -> &[Scalar] {
        Self::slice(&self.curly, self.dim, i, j)
    }

    pub fn prec_tensor(&self) -> &[Scalar] {
        &self.prec
    }

    pub fn succ_tensor(&self) -> &[Scalar] {
        &self.succ
    }

    pub fn curly_tensor(&self) -> &[Scalar] {
        &self.curly
    }

    fn op(&self, t: &[Scalar], x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim;
        let mut out = vec![scalar::zero(); d];
        for i in 0..d {
            if scalar::is_zero(&x[i]) {
                continue;
            }
            for j in 0..d {
                if scalar::is_zero(&y[j]) {
                    continue;
                }
                let coef = &x[i] * &y[j];
                for (k, c) in Self::slice(t, d, i, j).iter().enumerate() {
                    if !scalar::is_zero(c) {
                        out[k] += c * &coef;
                    }
                }
            }
        }
        out
    }

    pub fn prec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.op(&self.prec, x, y)
    }

    pub fn succ(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.op(&self.succ, x, y)
    }

    pub fn curly(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.op(&self.curly, x, y)
    }

    /// `a * b = a < b + a > b + a v b`.
    pub fn total(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.prec(x, y);
        for (o, v) in out.iter_mut().zip(self.succ(x, y)) {
            *o += v;
        }
        for (o, v) in out.iter_mut().zip(self.curly(x, y)) {
            *o += v;
        }
        out
    }

    pub fn total_tensor(&self) -> Vec<Scalar> {
        self.prec
            .iter()
            .zip(&self.succ)
            .zip(&self.curly)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }

    /// The total associative algebra of the NS-algebra.
    pub fn total_algebra(&self) -> Result<Algebra> {
        Algebra::new(self.dim, self.total_tensor())
    }

    pub fn is_dendriform(&self) -> bool {
        self.curly.iter().all(scalar::is_zero)
    }

    fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![scalar::zero(); self.dim];
        v[i] = scalar::one();
        v
    }
}

/// The four NS identities on all basis triples, plus the dendriform flag.
pub fn verify_ns(ns: &NSAlgebra) -> NsReport {
    let d = ns.dim();
    let mut law1 = LawChecker::new("ns-1");
    let mut law2 = LawChecker::new("ns-2");
    let mut law3 = LawChecker::new("ns-3");
    let mut law4 = LawChecker::new("ns-4");
    for i in 0..d {
        let a = ns.basis(i);
        for j in 0..d {
            let b = ns.basis(j);
            for k in 0..d {
                let c = ns.basis(k);
                let ab_star = ns.total(&a, &b);
                let bc_star = ns.total(&b, &c);
                // (a < b) < c = a < (b * c)
                law1.check(
                    &[i, j, k],
                    ns.prec(&ns.prec(&a, &b), &c),
                    ns.prec(&a, &bc_star),
                );
                // (a > b) < c = a > (b < c)
                law2.check(
                    &[i, j, k],
                    ns.prec(&ns.succ(&a, &b), &c),
                    ns.succ(&a, &ns.prec(&b, &c)),
                );
                // (a * b) > c = a > (b > c)
                law3.check(
                    &[i, j, k],
                    ns.succ(&ab_star, &c),
                    ns.succ(&a, &ns.succ(&b, &c)),
                );
                // (a * b) v c + (a v b) < c = a > (b v c) + a v (b * c)
                let mut lhs = ns.curly(&ab_star, &c);
                for (x, v) in lhs.iter_mut().zip(ns.prec(&ns.curly(&a, &b), &c)) {
                    *x += v;
                }
                let mut rhs = ns.succ(&a, &ns.curly(&b, &c));
                for (x, v) in rhs.iter_mut().zip(ns.curly(&a, &bc_star)) {
                    *x += v;
                }
                law4.check(&[i, j, k], lhs, rhs);
            }
        }
    }
    let report = law1
        .into_report()
        .merge(law2.into_report())
        .merge(law3.into_report())
        .merge(law4.into_report());
    NsReport {
        report,
        dendriform: ns.is_dendriform(),
    }
}

/// The NS-algebra induced by a Nijenhuis operator:
/// `a <_N b = a.N(b)`, `a >_N b = N(a).b`, `a v_N b = -N(a.b)`.
/// Its total product is exactly the deformed multiplication, which is
/// asserted on construction.
pub fn induced_ns(na: &NijAlgebra) -> NSAlgebra {
    let d = na.dim();
    let a = na.algebra();
    let n = na.operator();
    let mut prec = vec![scalar::zero(); d * d * d];
    let mut succ = vec![scalar::zero(); d * d * d];
    let mut curly = vec![scalar::zero(); d * d * d];
    for i in 0..d {
        let ni = n.column(i);
        for j in 0..d {
            let nj = n.column(j);
            let p = a.product(&a.basis_vector(i), &nj);
            let s = a.product(&ni, &a.basis_vector(j));
            let c = n.apply(a.product_basis(i, j));
            for k in 0..d {
                prec[(i * d + j) * d + k] = p[k].clone();
                succ[(i * d + j) * d + k] = s[k].clone();
                curly[(i * d + j) * d + k] = -c[k].clone();
            }
        }
    }
    let ns = NSAlgebra::new(d, prec, succ, curly).expect("induced triple satisfies the NS laws");
    assert_eq!(
        ns.total_tensor(),
        deformed_algebra(na, 1).structure_tensor(),
        "total product of the induced NS-algebra must be the deformed multiplication"
    );
    ns
}

// ---------------------------------------------------------------------------
// Labeled cochains
// ---------------------------------------------------------------------------

/// Dimension of `O_A(n)` over a `d`-dimensional space.
pub fn labeled_space_dim(d: usize, n: usize) -> usize {
    if n == 1 {
        d * d
    } else {
        (n + 1) * d.pow(n as u32) * d
    }
}

fn component_count(arity: usize) -> usize {
    if arity == 1 {
        1
    } else {
        arity + 1
    }
}

/// An element of `O_A(n)`: one multimap per label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledCochain {
    arity: usize,
    dim: usize,
    components: Vec<MultiMap>,
}

impl LabeledCochain {
    pub fn zero(arity: usize, dim: usize) -> Self {
        assert!(arity >= 1);
        let components = (0..component_count(arity))
            .map(|_| MultiMap::zero(arity, dim, dim))
            .collect();
        LabeledCochain {
            arity,
            dim,
            components,
        }
    }

    pub fn from_components(components: Vec<MultiMap>) -> Result<Self> {
        let first = components.first().ok_or_else(|| {
            EngineError::Structure("labeled cochain needs at least one component".into())
        })?;
        let arity = first.arity();
        let dim = first.source_dim();
        if components.len() != component_count(arity) {
            return Err(EngineError::Dimension(format!(
                "arity-{arity} labeled cochain needs {} components, got {}",
                component_count(arity),
                components.len()
            )));
        }
        for c in &components {
            if c.arity() != arity || c.source_dim() != dim || c.target_dim() != dim {
                return Err(EngineError::Dimension(
                    "labeled cochain components must share arity and dimensions".into(),
                ));
            }
        }
        let lc = LabeledCochain {
            arity,
            dim,
            components,
        };
        debug_assert_eq!(
            labeled_space_dim(dim, arity),
            lc.components.len() * dim.pow(arity as u32) * dim
        );
        Ok(lc)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Component for the 1-based label `r`; labels beyond the stored range
    /// evaluate to zero and return `None` here.
    pub fn component(&self, r: usize) -> Option<&MultiMap> {
        if r == 0 {
            return None;
        }
        self.components.get(r - 1)
    }

    pub fn eval_label(&self, r: usize, args: &[Arg]) -> Vec<Scalar> {
        match self.component(r) {
            Some(c) => c.eval_args(args),
            None => vec![scalar::zero(); self.dim],
        }
    }

    /// `[1] + ... + [n+1]`: the sum of all components.
    pub fn eval_total(&self, args: &[Arg]) -> Vec<Scalar> {
        let mut out = vec![scalar::zero(); self.dim];
        for c in &self.components {
            for (x, v) in out.iter_mut().zip(c.eval_args(args)) {
                *x += v;
            }
        }
        out
    }

    pub fn add(&self, other: &LabeledCochain) -> LabeledCochain {
        assert_eq!(self.arity, other.arity);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect();
        LabeledCochain {
            arity: self.arity,
            dim: self.dim,
            components,
        }
    }

    pub fn scale(&self, s: &Scalar) -> LabeledCochain {
        LabeledCochain {
            arity: self.arity,
            dim: self.dim,
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiMap::is_zero)
    }

    /// Flatten with label-major layout: `((r-1) d + k) d^n + flat`.
    pub fn as_vector(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(labeled_space_dim(self.dim, self.arity));
        for c in &self.components {
            out.extend_from_slice(c.as_vector());
        }
        out
    }

    pub fn from_vector(arity: usize, dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != labeled_space_dim(dim, arity) {
            return Err(EngineError::Dimension(format!(
                "labeled cochain vector has {} entries, expected {}",
                entries.len(),
                labeled_space_dim(dim, arity)
            )));
        }
        let block = dim * dim.pow(arity as u32);
        let components = entries
            .chunks(block)
            .map(|chunk| MultiMap::from_vector(arity, dim, dim, chunk.to_vec()).unwrap())
            .collect();
        LabeledCochain::from_components(components)
    }

    /// Sum of all components as a single multimap.
    pub fn total_multimap(&self) -> MultiMap {
        let mut out = MultiMap::zero(self.arity, self.dim, self.dim);
        for c in &self.components {
            out = out.add(c);
        }
        out
    }
}

/// The Maurer-Cartan encoding of a product triple in `O_A(2)`:
/// `pi([1]) = prec`, `pi([2]) = succ`, `pi([3]) = curly`.
pub fn encode_pi(ns: &NSAlgebra) -> LabeledCochain {
    let d = ns.dim();
    let comp = |t: &'static str| {
        MultiMap::from_fn(2, d, d, |tup| match t {
            "p" => ns.prec_basis(tup[0], tup[1]).to_vec(),
            "s" => ns.succ_basis(tup[0], tup[1]).to_vec(),
            _ => ns.curly_basis(tup[0], tup[1]).to_vec(),
        })
    };
    LabeledCochain::from_components(vec![comp("p"), comp("s"), comp("c")]).unwrap()
}

/// Partial composition `f o_i g` in the nonsymmetric operad of labeled
/// spaces, by the five-case table over the output label.
pub fn partial_composition(f: &LabeledCochain, g: &LabeledCochain, i: usize) -> Result<LabeledCochain> {
    let (m, n) = (f.arity(), g.arity());
    if i < 1 || i > m {
        return Err(EngineError::Structure(format!(
            "insertion position {i} out of range 1..={m}"
        )));
    }
    if f.dim() != g.dim() {
        return Err(EngineError::Dimension(
            "labeled cochains over different spaces".into(),
        ));
    }
    let d = f.dim();
    let out_arity = m + n - 1;
    let mut components = Vec::new();
    for r in 1..=component_count(out_arity) {
        let comp = MultiMap::from_fn(out_arity, d, d, |t: &[usize]| {
            let inner_tuple = &t[i - 1..i - 1 + n];
            let g_args: Vec<Arg> = inner_tuple.iter().map(|&b| Arg::Basis(b)).collect();
            let eval_f = |label: usize, inner: &[Scalar]| -> Vec<Scalar> {
                let mut args: Vec<Arg> = Vec::with_capacity(m);
                for &b in &t[..i - 1] {
                    args.push(Arg::Basis(b));
                }
                args.push(Arg::Vector(inner));
                for &b in &t[i - 1 + n..] {
                    args.push(Arg::Basis(b));
                }
                f.eval_label(label, &args)
            };
            if out_arity == 1 {
                // one label, one case: plain composition of the single
                // components
                let inner = g.eval_total(&g_args);
                return eval_f(1, &inner);
            }
            if r <= i - 1 {
                eval_f(r, &g.eval_total(&g_args))
            } else if r <= i + n - 1 {
                eval_f(i, &g.eval_label(r - i + 1, &g_args))
            } else if r <= m + n - 1 {
                eval_f(r - n + 1, &g.eval_total(&g_args))
            } else {
                // r = m + n
                let mut out = eval_f(i, &g.eval_label(n + 1, &g_args));
                for (x, v) in out.iter_mut().zip(eval_f(m + 1, &g.eval_total(&g_args))) {
                    *x += v;
                }
                out
            }
        });
        components.push(comp);
    }
    LabeledCochain::from_components(components)
}

/// Graded Lie bracket on the shifted labeled spaces.
pub fn ns_bracket(f: &LabeledCochain, g: &LabeledCochain) -> Result<LabeledCochain> {
    let (m, n) = (f.arity(), g.arity());
    let mut out = LabeledCochain::zero(m + n - 1, f.dim());
    for i in 1..=m {
        let t = partial_composition(f, g, i)?;
        out = out.add(&t.scale(&signs::ns_bracket_first(i, n)));
    }
    let flip = signs::ns_bracket_flip(m, n);
    for i in 1..=n {
        let t = partial_composition(g, f, i)?;
        out = out.add(&t.scale(&(&flip * signs::ns_bracket_second(i, m))));
    }
    Ok(out)
}

/// True when `[[pi, pi]] = 0`, i.e. the encoded triple is NS.
pub fn is_maurer_cartan(pi: &LabeledCochain) -> Result<bool> {
    Ok(ns_bracket(pi, pi)?.is_zero())
}

/// `delta_pi(f) = (-1)^{n-1} [[pi, f]]`; rejects `pi` that is not
/// Maurer-Cartan, since the map squares to zero only then.
pub fn ns_differential(pi: &LabeledCochain, f: &LabeledCochain) -> Result<LabeledCochain> {
    if pi.arity() != 2 {
        return Err(EngineError::Structure("pi must have arity 2".into()));
    }
    if !is_maurer_cartan(pi)? {
        return Err(EngineError::Structure(
            "pi is not a Maurer-Cartan element; the triple it encodes is not an NS-algebra".into(),
        ));
    }
    let br = ns_bracket(pi, f)?;
    Ok(br.scale(&signs::ns_differential(f.arity())))
}

/// `Theta_n`: the comparison map from the reduced operator complex into the
/// shifted labeled complex of the induced NS-algebra.
pub fn theta_map(na: &NijAlgebra, f: &MultiMap) -> Result<LabeledCochain> {
    let n = f.arity();
    if n < 1 {
        return Err(EngineError::Structure("theta needs arity >= 1".into()));
    }
    let d = na.dim();
    if f.source_dim() != d || f.target_dim() != d {
        return Err(EngineError::Dimension(
            "theta wants an adjoint-valued cochain over the algebra".into(),
        ));
    }
    let a = na.algebra();
    let mut components = Vec::new();
    for r in 1..=(n + 2) {
        let comp = MultiMap::from_fn(n + 1, d, d, |t: &[usize]| {
            if r == 1 {
                let inner = f.eval_basis(&t[1..]);
                a.product(&a.basis_vector(t[0]), &inner)
                    .into_iter()
                    .map(|v| v * signs::theta_first(n))
                    .collect()
            } else if r <= n {
                vec![scalar::zero(); d]
            } else if r == n + 1 {
                let inner = f.eval_basis(&t[..n]);
                a.product(&inner, &a.basis_vector(t[n]))
            } else {
                let mut out = vec![scalar::zero(); d];
                for i in 1..=n {
                    let prod = a.product_basis(t[i - 1], t[i]);
                    let mut args: Vec<Arg> = Vec::with_capacity(n);
                    for &x in &t[..i - 1] {
                        args.push(Arg::Basis(x));
                    }
                    args.push(Arg::Vector(prod));
                    for &x in &t[i + 1..] {
                        args.push(Arg::Basis(x));
                    }
                    let sign = signs::theta_interior(n, i);
                    for (x, v) in out.iter_mut().zip(f.eval_args(&args)) {
                        *x += v * &sign;
                    }
                }
                out
            }
        });
        components.push(comp);
    }
    LabeledCochain::from_components(components)
}

/// `Psi_n(f) = (-1)^{n+1} delta_Hoch f`, which also equals the component sum
/// of `Theta_n(f)`.
pub fn psi_map(na: &NijAlgebra, f: &MultiMap) -> Result<MultiMap> {
    if f.arity() < 1 {
        return Err(EngineError::Structure("psi needs arity >= 1".into()));
    }
    let delta = hochschild_delta_adjoint(na.algebra(), f)?;
    Ok(delta.scale(&signs::psi(f.arity())))
}
