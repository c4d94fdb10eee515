//! 2-term A-infinity algebras with homotopy Nijenhuis operators, their
//! skeletal and strict characterizations (third cocycles and crossed
//! modules), truncated graded A-infinity algebras with strict homotopy
//! Nijenhuis operators, induced NS-infinity structures and deformed
//! A-infinity algebras.
//!
//! Graded data is truncated by construction: a degree window and arity cap
//! are part of the value, and identities are asserted within the caps on all
//! homogeneous basis tuples, Koszul signs included.

use crate::algebra::{
    Algebra, Bimodule, LawChecker, LinearMap, NijAlgebra, NijBimodule, Report,
};
use crate::complexes::{cone_join, cone_reduced_complex, ComplexConfig};
use crate::error::{EngineError, Result};
use crate::scalar::{self, Scalar};
use crate::signs;
use crate::tensor::{tuples, Arg, MultiMap};

// ---------------------------------------------------------------------------
// 2-term structures
// ---------------------------------------------------------------------------

/// A 2-term A-infinity algebra `(A_1 -> A_0, mu_2, mu_3)` with the three
/// mixed-arity components of `mu_2` stored separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermAInf {
    dim0: usize,
    dim1: usize,
    bdry: LinearMap,
    /// `A_0 x A_0 -> A_0`, flat `(i d0 + j) d0 + k`
    mu2_00: Vec<Scalar>,
    /// `A_0 x A_1 -> A_1`, flat `(i d1 + u) d1 + v`
    mu2_01: Vec<Scalar>,
    /// `A_1 x A_0 -> A_1`, flat `(u d0 + i) d1 + v`
    mu2_10: Vec<Scalar>,
    /// `A_0^3 -> A_1`, flat `((i d0 + j) d0 + k) d1 + v`
    mu3: Vec<Scalar>,
}

fn bilinear(
    t: &[Scalar],
    d2: usize,
    dout: usize,
    x: &[Scalar],
    y: &[Scalar],
) -> Vec<Scalar> {
    let mut out = vec![scalar::zero(); dout];
    for (i, xi) in x.iter().enumerate() {
        if scalar::is_zero(xi) {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if scalar::is_zero(yj) {
                continue;
            }
            let base = (i * d2 + j) * dout;
            let coef = xi * yj;
            for k in 0..dout {
                if !scalar::is_zero(&t[base + k]) {
                    out[k] += &t[base + k] * &coef;
                }
            }
        }
    }
    out
}

impl TwoTermAInf {
    pub fn from_parts(
        dim0: usize,
        dim1: usize,
        bdry: LinearMap,
        mu2_00: Vec<Scalar>,
        mu2_01: Vec<Scalar>,
        mu2_10: Vec<Scalar>,
        mu3: Vec<Scalar>,
    ) -> Result<Self> {
        if bdry.rows() != dim0 || bdry.cols() != dim1 {
            return Err(EngineError::Dimension(
                "boundary must map A_1 into A_0".into(),
            ));
        }
        let checks = [
            (mu2_00.len(), dim0 * dim0 * dim0, "mu2 on A0 x A0"),
            (mu2_01.len(), dim0 * dim1 * dim1, "mu2 on A0 x A1"),
            (mu2_10.len(), dim1 * dim0 * dim1, "mu2 on A1 x A0"),
            (mu3.len(), dim0 * dim0 * dim0 * dim1, "mu3"),
        ];
        for (got, want, name) in checks {
            if got != want {
                return Err(EngineError::Dimension(format!(
                    "{name} tensor has {got} entries, expected {want}"
                )));
            }
        }
        Ok(TwoTermAInf {
            dim0,
            dim1,
            bdry,
            mu2_00,
            mu2_01,
            mu2_10,
            mu3,
        })
    }

    pub fn new(
        dim0: usize,
        dim1: usize,
        bdry: LinearMap,
        mu2_00: Vec<Scalar>,
        mu2_01: Vec<Scalar>,
        mu2_10: Vec<Scalar>,
        mu3: Vec<Scalar>,
    ) -> Result<Self> {
        let t = TwoTermAInf::from_parts(dim0, dim1, bdry, mu2_00, mu2_01, mu2_10, mu3)?;
        let report = t.verify();
        if !report.ok {
            return Err(EngineError::invalid("2-term A-infinity algebra", report));
        }
        Ok(t)
    }

    pub fn dim0(&self) -> usize {
        self.dim0
    }

    pub fn dim1(&self) -> usize {
        self.dim1
    }

    pub fn boundary(&self) -> &LinearMap {
        &self.bdry
    }

    pub fn is_skeletal(&self) -> bool {
        self.bdry.is_zero()
    }

    pub fn is_strict(&self) -> bool {
        self.mu3.iter().all(scalar::is_zero)
    }

    pub fn mu2_00(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        bilinear(&self.mu2_00, self.dim0, self.dim0, x, y)
    }

    pub fn mu2_01(&self, x: &[Scalar], u: &[Scalar]) -> Vec<Scalar> {
        bilinear(&self.mu2_01, self.dim1, self.dim1, x, u)
    }

    pub fn mu2_10(&self, u: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        bilinear(&self.mu2_10, self.dim0, self.dim1, u, x)
    }

    pub fn mu3(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Vec<Scalar> {
        let d0 = self.dim0;
        let d1 = self.dim1;
        let mut out = vec![scalar::zero(); d1];
        for (i, xi) in x.iter().enumerate() {
            if scalar::is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if scalar::is_zero(yj) {
                    continue;
                }
                let cij = xi * yj;
                for (k, zk) in z.iter().enumerate() {
                    if scalar::is_zero(zk) {
                        continue;
                    }
                    let coef = &cij * zk;
                    let base = ((i * d0 + j) * d0 + k) * d1;
                    for v in 0..d1 {
                        if !scalar::is_zero(&self.mu3[base + v]) {
                            out[v] += &self.mu3[base + v] * &coef;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mu3_tensor(&self) -> &[Scalar] {
        &self.mu3
    }

    pub fn mu2_00_tensor(&self) -> &[Scalar] {
        &self.mu2_00
    }

    pub fn mu2_01_tensor(&self) -> &[Scalar] {
        &self.mu2_01
    }

    pub fn mu2_10_tensor(&self) -> &[Scalar] {
        &self.mu2_10
    }

    fn b0(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![scalar::zero(); self.dim0];
        v[i] = scalar::one();
        v
    }

    fn b1(&self, u: usize) -> Vec<Scalar> {
        let mut v = vec![scalar::zero(); self.dim1];
        v[u] = scalar::one();
        v
    }

    /// The eight defining identities on all basis tuples.
    pub fn verify(&self) -> Report {
        let d0 = self.dim0;
        let d1 = self.dim1;
        let mut laws: Vec<LawChecker> = [
            "ainf-1", "ainf-2", "ainf-3", "ainf-4", "ainf-5", "ainf-6", "ainf-7", "ainf-8",
        ]
        .into_iter()
        .map(LawChecker::new)
        .collect();
        let sub = |x: Vec<Scalar>, y: Vec<Scalar>| -> (Vec<Scalar>, Vec<Scalar>) { (x, y) };
        for i in 0..d0 {
            let a = self.b0(i);
            for u in 0..d1 {
                let eu = self.b1(u);
                // (1) bdry mu2(a, u) = mu2(a, bdry u)
                let (l, r) = sub(
                    self.bdry.apply(&self.mu2_01(&a, &eu)),
                    self.mu2_00(&a, &self.bdry.column(u)),
                );
                laws[0].check(&[i, u], l, r);
                // (2) bdry mu2(u, a) = mu2(bdry u, a)
                let (l, r) = sub(
                    self.bdry.apply(&self.mu2_10(&eu, &a)),
                    self.mu2_00(&self.bdry.column(u), &a),
                );
                laws[1].check(&[u, i], l, r);
            }
        }
        for u in 0..d1 {
            for v in 0..d1 {
                // (3) mu2(bdry u, v) = mu2(u, bdry v)
                let (l, r) = sub(
                    self.mu2_01(&self.bdry.column(u), &self.b1(v)),
                    self.mu2_10(&self.b1(u), &self.bdry.column(v)),
                );
                laws[2].check(&[u, v], l, r);
            }
        }
        for i in 0..d0 {
            let a = self.b0(i);
            for j in 0..d0 {
                let b = self.b0(j);
                for k in 0..d0 {
                    let c = self.b0(k);
                    // (4) bdry mu3(a,b,c) = mu2(mu2(a,b),c) - mu2(a,mu2(b,c))
                    let mut rhs = self.mu2_00(&self.mu2_00(&a, &b), &c);
                    for (x, y) in rhs.iter_mut().zip(self.mu2_00(&a, &self.mu2_00(&b, &c))) {
                        *x -= y;
                    }
                    laws[3].check(&[i, j, k], self.bdry.apply(&self.mu3(&a, &b, &c)), rhs);
                }
                for u in 0..d1 {
                    let eu = self.b1(u);
                    let du = self.bdry.column(u);
                    // (5) mu3(a,b,bdry u) = mu2(mu2(a,b),u) - mu2(a,mu2(b,u))
                    let mut rhs = self.mu2_01(&self.mu2_00(&a, &b), &eu);
                    for (x, y) in rhs.iter_mut().zip(self.mu2_01(&a, &self.mu2_01(&b, &eu))) {
                        *x -= y;
                    }
                    laws[4].check(&[i, j, u], self.mu3(&a, &b, &du), rhs);
                    // (6) mu3(a,bdry u,b) = mu2(mu2(a,u),b) - mu2(a,mu2(u,b))
                    let mut rhs = self.mu2_10(&self.mu2_01(&a, &eu), &b);
                    for (x, y) in rhs.iter_mut().zip(self.mu2_01(&a, &self.mu2_10(&eu, &b))) {
                        *x -= y;
                    }
                    laws[5].check(&[i, u, j], self.mu3(&a, &du, &b), rhs);
                    // (7) mu3(bdry u,a,b) = mu2(mu2(u,a),b) - mu2(u,mu2(a,b))
                    let mut rhs = self.mu2_10(&self.mu2_10(&eu, &a), &b);
                    for (x, y) in rhs.iter_mut().zip(self.mu2_10(&eu, &self.mu2_00(&a, &b))) {
                        *x -= y;
                    }
                    laws[6].check(&[u, i, j], self.mu3(&du, &a, &b), rhs);
                }
            }
        }
        for i in 0..d0 {
            let a = self.b0(i);
            for j in 0..d0 {
                let b = self.b0(j);
                for k in 0..d0 {
                    let c = self.b0(k);
                    for l in 0..d0 {
                        let dd = self.b0(l);
                        // (8) pentagon identity
                        let mut lhs = self.mu2_01(&a, &self.mu3(&b, &c, &dd));
                        for (x, y) in lhs
                            .iter_mut()
                            .zip(self.mu3(&self.mu2_00(&a, &b), &c, &dd))
                        {
                            *x -= y;
                        }
                        for (x, y) in lhs
                            .iter_mut()
                            .zip(self.mu3(&a, &self.mu2_00(&b, &c), &dd))
                        {
                            *x += y;
                        }
                        for (x, y) in lhs
                            .iter_mut()
                            .zip(self.mu3(&a, &b, &self.mu2_00(&c, &dd)))
                        {
                            *x -= y;
                        }
                        for (x, y) in lhs
                            .iter_mut()
                            .zip(self.mu2_10(&self.mu3(&a, &b, &c), &dd))
                        {
                            *x += y;
                        }
                        laws[7].check(&[i, j, k, l], lhs, vec![scalar::zero(); d1]);
                    }
                }
            }
        }
        laws.into_iter()
            .map(LawChecker::into_report)
            .fold(Report::passing(), Report::merge)
    }
}

/// A homotopy Nijenhuis operator `(N_0, N_1, N_2)` on a 2-term algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyNijOp {
    n0: LinearMap,
    n1: LinearMap,
    /// `A_0 x A_0 -> A_1`, flat `(i d0 + j) d1 + v`
    n2: Vec<Scalar>,
}

impl HomotopyNijOp {
    pub fn from_parts(dim0: usize, dim1: usize, n0: LinearMap, n1: LinearMap, n2: Vec<Scalar>) -> Result<Self> {
        if n0.rows() != dim0 || n0.cols() != dim0 || n1.rows() != dim1 || n1.cols() != dim1 {
            return Err(EngineError::Dimension(
                "operator components must be square on A_0 and A_1".into(),
            ));
        }
        if n2.len() != dim0 * dim0 * dim1 {
            return Err(EngineError::Dimension(format!(
                "N_2 tensor has {} entries, expected {}",
                n2.len(),
                dim0 * dim0 * dim1
            )));
        }
        Ok(HomotopyNijOp { n0, n1, n2 })
    }

    pub fn strict(dim0: usize, dim1: usize, n0: LinearMap, n1: LinearMap) -> Result<Self> {
        let n2 = vec![scalar::zero(); dim0 * dim0 * dim1];
        HomotopyNijOp::from_parts(dim0, dim1, n0, n1, n2)
    }

    pub fn n0(&self) -> &LinearMap {
        &self.n0
    }

    pub fn n1(&self) -> &LinearMap {
        &self.n1
    }

    pub fn n2(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        bilinear(&self.n2, x.len(), self.n1.rows(), x, y)
    }

    pub fn n2_tensor(&self) -> &[Scalar] {
        &self.n2
    }

    pub fn is_strict(&self) -> bool {
        self.n2.iter().all(scalar::is_zero)
    }
}

/// A 2-term A-infinity algebra together with a homotopy Nijenhuis operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermHN {
    pub ainf: TwoTermAInf,
    pub op: HomotopyNijOp,
}

/// The five homotopy Nijenhuis identities on all basis tuples.
pub fn verify_homotopy_nij(t: &TwoTermAInf, op: &HomotopyNijOp) -> Report {
    let d0 = t.dim0;
    let d1 = t.dim1;
    let mut laws: Vec<LawChecker> = ["infnij-1", "infnij-2", "infnij-3", "infnij-4", "infnij-5"]
        .into_iter()
        .map(LawChecker::new)
        .collect();
    // (1) bdry N_1 = N_0 bdry
    let lhs = t.bdry.compose(&op.n1);
    let rhs = op.n0.compose(&t.bdry);
    laws[0].check(
        &[0],
        lhs.entries().iter().flatten().cloned().collect(),
        rhs.entries().iter().flatten().cloned().collect(),
    );
    let deformed_00 = |t2: &TwoTermAInf, a: &[Scalar], b: &[Scalar]| -> Vec<Scalar> {
        // mu2(N0 a, b) + mu2(a, N0 b) - N0 mu2(a, b)
        let mut out = t2.mu2_00(&op.n0.apply(a), b);
        for (x, y) in out.iter_mut().zip(t2.mu2_00(a, &op.n0.apply(b))) {
            *x += y;
        }
        for (x, y) in out.iter_mut().zip(op.n0.apply(&t2.mu2_00(a, b))) {
            *x -= y;
        }
        out
    };
    for i in 0..d0 {
        let a = t.b0(i);
        for j in 0..d0 {
            let b = t.b0(j);
            // (2) N0(def(a,b)) - mu2(N0 a, N0 b) = bdry(N2(a,b))
            let mut lhs = op.n0.apply(&deformed_00(t, &a, &b));
            for (x, y) in lhs
                .iter_mut()
                .zip(t.mu2_00(&op.n0.apply(&a), &op.n0.apply(&b)))
            {
                *x -= y;
            }
            laws[1].check(&[i, j], lhs, t.bdry.apply(&op.n2(&a, &b)));
        }
        for u in 0..d1 {
            let a = t.b0(i);
            let eu = t.b1(u);
            // (3) N1(mu2(N0 a, u) + mu2(a, N1 u) - N1 mu2(a, u)) - mu2(N0 a, N1 u) = N2(a, bdry u)
            let mut inner = t.mu2_01(&op.n0.apply(&a), &eu);
            for (x, y) in inner.iter_mut().zip(t.mu2_01(&a, &op.n1.column(u))) {
                *x += y;
            }
            for (x, y) in inner.iter_mut().zip(op.n1.apply(&t.mu2_01(&a, &eu))) {
                *x -= y;
            }
            let mut lhs = op.n1.apply(&inner);
            for (x, y) in lhs
                .iter_mut()
                .zip(t.mu2_01(&op.n0.apply(&a), &op.n1.column(u)))
            {
                *x -= y;
            }
            laws[2].check(&[i, u], lhs, op.n2(&a, &t.bdry.column(u)));
            // (4) N1(mu2(N1 u, a) + mu2(u, N0 a) - N1 mu2(u, a)) - mu2(N1 u, N0 a) = N2(bdry u, a)
            let mut inner = t.mu2_10(&op.n1.column(u), &a);
            for (x, y) in inner.iter_mut().zip(t.mu2_10(&eu, &op.n0.apply(&a))) {
                *x += y;
            }
            for (x, y) in inner.iter_mut().zip(op.n1.apply(&t.mu2_10(&eu, &a))) {
                *x -= y;
            }
            let mut lhs = op.n1.apply(&inner);
            for (x, y) in lhs
                .iter_mut()
                .zip(t.mu2_10(&op.n1.column(u), &op.n0.apply(&a)))
            {
                *x -= y;
            }
            laws[3].check(&[u, i], lhs, op.n2(&t.bdry.column(u), &a));
        }
    }
    for i in 0..d0 {
        let a = t.b0(i);
        let na = op.n0.apply(&a);
        for j in 0..d0 {
            let b = t.b0(j);
            let nb = op.n0.apply(&b);
            for k in 0..d0 {
                let c = t.b0(k);
                let nc = op.n0.apply(&c);
                // (5) transcription of the long identity
                let mut lhs = t.mu2_01(&na, &op.n2(&b, &c));
                for (x, y) in lhs.iter_mut().zip(t.mu2_10(&op.n2(&a, &b), &nc)) {
                    *x -= y;
                }
                for (x, y) in lhs.iter_mut().zip(op.n2(&deformed_00(t, &a, &b), &c)) {
                    *x -= y;
                }
                for (x, y) in lhs.iter_mut().zip(op.n2(&a, &deformed_00(t, &b, &c))) {
                    *x += y;
                }
                let mut inner = t.mu2_01(&a, &op.n2(&b, &c));
                for (x, y) in inner.iter_mut().zip(op.n2(&t.mu2_00(&a, &b), &c)) {
                    *x -= y;
                }
                for (x, y) in inner.iter_mut().zip(op.n2(&a, &t.mu2_00(&b, &c))) {
                    *x += y;
                }
                for (x, y) in inner.iter_mut().zip(t.mu2_10(&op.n2(&a, &b), &c)) {
                    *x -= y;
                }
                for (x, y) in lhs.iter_mut().zip(op.n1.apply(&inner)) {
                    *x -= y;
                }
                // rhs = partial^{N0,N1}(mu3)(a,b,c)
                let n1p = |s: u32, v: &[Scalar]| op.n1.pow(s).apply(v);
                let mut rhs = t.mu3(&na, &nb, &nc);
                for term in [
                    t.mu3(&na, &nb, &c),
                    t.mu3(&na, &b, &nc),
                    t.mu3(&a, &nb, &nc),
                ] {
                    for (x, y) in rhs.iter_mut().zip(n1p(1, &term)) {
                        *x -= y;
                    }
                }
                for term in [
                    t.mu3(&na, &b, &c),
                    t.mu3(&a, &nb, &c),
                    t.mu3(&a, &b, &nc),
                ] {
                    for (x, y) in rhs.iter_mut().zip(n1p(2, &term)) {
                        *x += y;
                    }
                }
                for (x, y) in rhs.iter_mut().zip(n1p(3, &t.mu3(&a, &b, &c))) {
                    *x -= y;
                }
                laws[4].check(&[i, j, k], lhs, rhs);
            }
        }
    }
    laws.into_iter()
        .map(LawChecker::into_report)
        .fold(Report::passing(), Report::merge)
}

// ---------------------------------------------------------------------------
// Crossed modules
// ---------------------------------------------------------------------------

/// A crossed module of Nijenhuis algebras: `phi : top -> base` equivariant,
/// actions making the top space a Nijenhuis bimodule, plus the Peiffer-type
/// compatibilities.
#[derive(Clone, Debug)]
pub struct CrossedModule {
    pub base: NijAlgebra,
    pub top: NijAlgebra,
    pub phi: LinearMap,
    pub actions: Bimodule,
}

impl CrossedModule {
    pub fn new(base: NijAlgebra, top: NijAlgebra, phi: LinearMap, actions: Bimodule) -> Result<Self> {
        let cm = CrossedModule {
            base,
            top,
            phi,
            actions,
        };
        let report = cm.verify();
        if !report.ok {
            return Err(EngineError::invalid("crossed module", report));
        }
        Ok(cm)
    }

    pub fn verify(&self) -> Report {
        let d = self.base.dim();
        let m = self.top.dim();
        let mut report = Report::passing();
        if self.actions.algebra() != self.base.algebra()
            || self.actions.dim() != m
            || self.phi.rows() != d
            || self.phi.cols() != m
        {
            let mut law = LawChecker::new("crossed-shape");
            law.check(&[], vec![scalar::one()], vec![scalar::zero()]);
            return law.into_report();
        }
        // (i) the actions with N_1 form a Nijenhuis bimodule over the base
        report = report.merge(self.actions.verify());
        report = report.merge(crate::algebra::verify_nij_bimodule_operator(
            &self.base,
            &self.actions,
            self.top.operator(),
        ));
        // phi is a morphism of Nijenhuis algebras
        report = report.merge(crate::algebra::verify_nij_morphism(
            &self.top,
            &self.base,
            &self.phi,
        ));
        // (ii) the six compatibility identities
        let mut c1 = LawChecker::new("crossed-1");
        let mut c2 = LawChecker::new("crossed-2");
        let b = &self.actions;
        let top = self.top.algebra();
        for i in 0..d {
            let a = self.base.algebra().basis_vector(i);
            for u in 0..m {
                let eu = b.module_basis_vector(u);
                for v in 0..m {
                    let ev = b.module_basis_vector(v);
                    // a |> (u .1 v) = (a |> u) .1 v
                    c1.check(
                        &[i, u, v],
                        b.act_left(&a, top.product_basis(u, v)),
                        top.product(&b.act_left(&a, &eu), &ev),
                    );
                    // (u <| a) .1 v = u .1 (a |> v)
                    c1.check(
                        &[u, i, v],
                        top.product(&b.act_right(&eu, &a), &ev),
                        top.product(&eu, &b.act_left(&a, &ev)),
                    );
                    // (u .1 v) <| a = u .1 (v <| a)
                    c1.check(
                        &[u, v, i],
                        b.act_right(top.product_basis(u, v), &a),
                        top.product(&eu, &b.act_right(&ev, &a)),
                    );
                }
                // phi(a |> u) = a . phi(u)
                c2.check(
                    &[i, u],
                    self.phi.apply(&b.act_left(&a, &eu)),
                    self.base.algebra().product(&a, &self.phi.column(u)),
                );
                // phi(u <| a) = phi(u) . a
                c2.check(
                    &[u, i],
                    self.phi.apply(&b.act_right(&eu, &a)),
                    self.base.algebra().product(&self.phi.column(u), &a),
                );
            }
        }
        for u in 0..m {
            for v in 0..m {
                let eu = b.module_basis_vector(u);
                let ev = b.module_basis_vector(v);
                // phi(u) |> v = u .1 v = u <| phi(v)
                let prod = top.product_basis(u, v).to_vec();
                c2.check(
                    &[u, v, 0],
                    b.act_left(&self.phi.column(u), &ev),
                    prod.clone(),
                );
                c2.check(&[u, v, 1], b.act_right(&eu, &self.phi.column(v)), prod);
            }
        }
        report.merge(c1.into_report()).merge(c2.into_report())
    }
}

// ---------------------------------------------------------------------------
// Skeletal <-> third cocycle
// ---------------------------------------------------------------------------

/// Data classified by a skeletal 2-term homotopy Nijenhuis algebra.
#[derive(Clone, Debug)]
pub struct SkeletalCocycle {
    pub na: NijAlgebra,
    pub nb: NijBimodule,
    pub chi: MultiMap,
    pub f_part: MultiMap,
}

/// Skeletal structure to third cocycle: `(A_0, mu_2, N_0)` is a Nijenhuis
/// algebra, `(A_1, mu_2-actions, N_1)` a Nijenhuis bimodule, and
/// `(mu_3, N_2)` a 3-cocycle of the reduced cone.
pub fn skeletal_to_cocycle(t: &TwoTermAInf, op: &HomotopyNijOp) -> Result<SkeletalCocycle> {
    if !t.is_skeletal() {
        return Err(EngineError::Structure(
            "the boundary map must vanish for the skeletal correspondence".into(),
        ));
    }
    let report = t.verify().merge(verify_homotopy_nij(t, op));
    if !report.ok {
        return Err(EngineError::invalid("skeletal 2-term structure", report));
    }
    let d = t.dim0;
    let m = t.dim1;
    let alg = Algebra::new(d, t.mu2_00.clone())?;
    let na = NijAlgebra::new(alg, op.n0.clone())?;
    let bim = Bimodule::new(
        na.algebra().clone(),
        m,
        t.mu2_01.clone(),
        t.mu2_10.clone(),
    )?;
    let nb = NijBimodule::new(na.clone(), bim, op.n1.clone())?;
    let chi = MultiMap::from_fn(3, d, m, |s| {
        t.mu3(&t.b0(s[0]), &t.b0(s[1]), &t.b0(s[2]))
    });
    let f_part = MultiMap::from_fn(2, d, m, |s| op.n2(&t.b0(s[0]), &t.b0(s[1])));
    let complex = cone_reduced_complex(&na, &nb, 3, &ComplexConfig::default())?;
    let v = cone_join(&chi, Some(&f_part));
    if !complex.is_cocycle(3, &v)? {
        return Err(EngineError::NotCocycle { degree: 3 });
    }
    Ok(SkeletalCocycle {
        na,
        nb,
        chi,
        f_part,
    })
}

/// Third cocycle to skeletal structure; the output is fully verified.
pub fn cocycle_to_skeletal(
    na: &NijAlgebra,
    nb: &NijBimodule,
    chi: &MultiMap,
    f_part: &MultiMap,
) -> Result<TwoTermHN> {
    if chi.arity() != 3 || f_part.arity() != 2 {
        return Err(EngineError::Structure(
            "a third cocycle is a pair of arities (3, 2)".into(),
        ));
    }
    let d = na.dim();
    let m = nb.dim();
    let complex = cone_reduced_complex(na, nb, 3, &ComplexConfig::default())?;
    let v = cone_join(chi, Some(f_part));
    if !complex.is_cocycle(3, &v)? {
        return Err(EngineError::NotCocycle { degree: 3 });
    }
    let b = nb.bimodule();
    let mut mu2_01 = vec![scalar::zero(); d * m * m];
    let mut mu2_10 = vec![scalar::zero(); m * d * m];
    for i in 0..d {
        for u in 0..m {
            for v2 in 0..m {
                mu2_01[(i * m + u) * m + v2] = b.left_basis(i, u)[v2].clone();
                mu2_10[(u * d + i) * m + v2] = b.right_basis(u, i)[v2].clone();
            }
        }
    }
    let mut mu3 = vec![scalar::zero(); d * d * d * m];
    for (flat, s) in tuples(d, 3).enumerate() {
        let val = chi.eval_basis(&s);
        for v2 in 0..m {
            mu3[flat * m + v2] = val[v2].clone();
        }
    }
    let mut n2 = vec![scalar::zero(); d * d * m];
    for (flat, s) in tuples(d, 2).enumerate() {
        let val = f_part.eval_basis(&s);
        for v2 in 0..m {
            n2[flat * m + v2] = val[v2].clone();
        }
    }
    let ainf = TwoTermAInf::new(
        d,
        m,
        LinearMap::zero(d, m),
        na.algebra().structure_tensor().to_vec(),
        mu2_01,
        mu2_10,
        mu3,
    )?;
    let op = HomotopyNijOp::from_parts(d, m, na.operator().clone(), nb.operator().clone(), n2)?;
    let report = verify_homotopy_nij(&ainf, &op);
    if !report.ok {
        return Err(EngineError::invalid("skeletal structure from cocycle", report));
    }
    Ok(TwoTermHN { ainf, op })
}

// ---------------------------------------------------------------------------
// Strict <-> crossed module
// ---------------------------------------------------------------------------

/// Strict structure to crossed module: the top product is
/// `u .1 v = mu2(bdry u, v) = mu2(u, bdry v)`.
pub fn strict_to_crossed(t: &TwoTermAInf, op: &HomotopyNijOp) -> Result<CrossedModule> {
    if !t.is_strict() || !op.is_strict() {
        return Err(EngineError::Structure(
            "the strict correspondence needs mu3 = 0 and N2 = 0".into(),
        ));
    }
    let report = t.verify().merge(verify_homotopy_nij(t, op));
    if !report.ok {
        return Err(EngineError::invalid("strict 2-term structure", report));
    }
    let d = t.dim0;
    let m = t.dim1;
    let base_alg = Algebra::new(d, t.mu2_00.clone())?;
    let base = NijAlgebra::new(base_alg, op.n0.clone())?;
    let mut top_mu = vec![scalar::zero(); m * m * m];
    for u in 0..m {
        for v in 0..m {
            let prod = t.mu2_01(&t.bdry.column(u), &t.b1(v));
            let other = t.mu2_10(&t.b1(u), &t.bdry.column(v));
            if prod != other {
                return Err(EngineError::Structure(
                    "mu2(bdry u, v) != mu2(u, bdry v); input is not a valid strict structure".into(),
                ));
            }
            for k in 0..m {
                top_mu[(u * m + v) * m + k] = prod[k].clone();
            }
        }
    }
    let top_alg = Algebra::new(m, top_mu)?;
    let top = NijAlgebra::new(top_alg, op.n1.clone())?;
    let actions = Bimodule::new(base.algebra().clone(), m, t.mu2_01.clone(), t.mu2_10.clone())?;
    CrossedModule::new(base, top, t.bdry.clone(), actions)
}

/// Crossed module to strict structure: `bdry = phi`, `mu_2` from the base
/// product and the actions, `mu_3 = 0`, `N_2 = 0`.
pub fn crossed_to_strict(cm: &CrossedModule) -> Result<TwoTermHN> {
    let report = cm.verify();
    if !report.ok {
        return Err(EngineError::invalid("crossed module", report));
    }
    let d = cm.base.dim();
    let m = cm.top.dim();
    let b = &cm.actions;
    let mut mu2_01 = vec![scalar::zero(); d * m * m];
    let mut mu2_10 = vec![scalar::zero(); m * d * m];
    for i in 0..d {
        for u in 0..m {
            for v in 0..m {
                mu2_01[(i * m + u) * m + v] = b.left_basis(i, u)[v].clone();
                mu2_10[(u * d + i) * m + v] = b.right_basis(u, i)[v].clone();
            }
        }
    }
    let ainf = TwoTermAInf::new(
        d,
        m,
        cm.phi.clone(),
        cm.base.algebra().structure_tensor().to_vec(),
        mu2_01,
        mu2_10,
        vec![scalar::zero(); d * d * d * m],
    )?;
    let op = HomotopyNijOp::strict(d, m, cm.base.operator().clone(), cm.top.operator().clone())?;
    let rep = verify_homotopy_nij(&ainf, &op);
    if !rep.ok {
        return Err(EngineError::invalid("strict structure from crossed module", rep));
    }
    Ok(TwoTermHN { ainf, op })
}

// ---------------------------------------------------------------------------
// Truncated graded A-infinity algebras
// ---------------------------------------------------------------------------

/// A graded space given by the degree of each basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    degrees: Vec<i64>,
}

impl GradedSpace {
    pub fn new(degrees: Vec<i64>) -> Self {
        GradedSpace { degrees }
    }

    /// Build from `(degree, dimension)` blocks.
    pub fn from_blocks(blocks: &[(i64, usize)]) -> Self {
        let mut degrees = Vec::new();
        for &(deg, dim) in blocks {
            degrees.extend(std::iter::repeat(deg).take(dim));
        }
        GradedSpace { degrees }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.degrees[idx]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn concat(&self, other: &GradedSpace) -> GradedSpace {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        GradedSpace { degrees }
    }
}

/// A truncated A-infinity algebra: operations `mu_1..mu_cap` on a graded
/// space, each `mu_n` of degree `n - 2`, identities asserted for
/// `k <= k_max` on all homogeneous basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAInf {
    space: GradedSpace,
    ops: Vec<MultiMap>,
    k_max: usize,
}

impl GradedAInf {
    /// Shape- and degree-checked construction; identities are not asserted
    /// here (use `verify` / `new`).
    pub fn from_parts(space: GradedSpace, ops: Vec<MultiMap>, k_max: usize) -> Result<Self> {
        let dim = space.dim();
        for (idx, op) in ops.iter().enumerate() {
            let n = idx + 1;
            if op.arity() != n || op.source_dim() != dim || op.target_dim() != dim {
                return Err(EngineError::Dimension(format!(
                    "op {n} must be an arity-{n} map on the {dim}-dimensional space"
                )));
            }
            // deg(mu_n) = n - 2
            for (flat, tuple) in tuples(dim, n).enumerate() {
                let want: i64 = tuple.iter().map(|&i| space.degree(i)).sum::<i64>() + n as i64 - 2;
                for k in 0..dim {
                    let v = &op.as_vector()[k * dim.pow(n as u32) + flat];
                    if !scalar::is_zero(v) && space.degree(k) != want {
                        return Err(EngineError::Structure(format!(
                            "degree-window violation: mu_{n} at tuple {tuple:?} hits basis {k} of degree {}, expected {want}",
                            space.degree(k)
                        )));
                    }
                }
            }
        }
        Ok(GradedAInf { space, ops, k_max })
    }

    pub fn new(space: GradedSpace, ops: Vec<MultiMap>, k_max: usize) -> Result<Self> {
        let g = GradedAInf::from_parts(space, ops, k_max)?;
        let report = g.verify();
        if !report.ok {
            return Err(EngineError::invalid("graded A-infinity algebra", report));
        }
        Ok(g)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn arity_cap(&self) -> usize {
        self.ops.len()
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `mu_n`, or `None` beyond the stored arity cap (treated as zero).
    pub fn op(&self, n: usize) -> Option<&MultiMap> {
        if n == 0 {
            None
        } else {
            self.ops.get(n - 1)
        }
    }

    fn prefix_degree(&self, tuple: &[usize]) -> i64 {
        tuple.iter().map(|&i| self.space.degree(i)).sum()
    }

    /// The Stasheff identities with Koszul signs, for `k <= k_max`.
    pub fn verify(&self) -> Report {
        let dim = self.dim();
        let mut law = LawChecker::new("ainf-identity");
        for k in 1..=self.k_max {
            for tuple in tuples(dim, k) {
                let mut total = vec![scalar::zero(); dim];
                for n in 1..=k {
                    let m = k + 1 - n;
                    let (Some(mu_m), Some(mu_n)) = (self.op(m), self.op(n)) else {
                        continue;
                    };
                    for i in 1..=m {
                        let inner = mu_n.eval_basis(&tuple[i - 1..i - 1 + n]);
                        if scalar::all_zero(&inner) {
                            continue;
                        }
                        let mut args: Vec<Arg> = Vec::with_capacity(m);
                        for &b in &tuple[..i - 1] {
                            args.push(Arg::Basis(b));
                        }
                        args.push(Arg::Vector(&inner));
                        for &b in &tuple[i - 1 + n..] {
                            args.push(Arg::Basis(b));
                        }
                        let sign = signs::ainf(i, n, self.prefix_degree(&tuple[..i - 1]));
                        for (x, v) in total.iter_mut().zip(mu_m.eval_args(&args)) {
                            *x += v * &sign;
                        }
                    }
                }
                law.check(&tuple, total, vec![scalar::zero(); dim]);
            }
        }
        law.into_report()
    }
}

/// An associative algebra viewed as a graded A-infinity algebra
/// concentrated in degree 0.
pub fn ainf_from_algebra(a: &Algebra, k_max: usize) -> GradedAInf {
    let d = a.dim();
    let space = GradedSpace::from_blocks(&[(0, d)]);
    let mu1 = MultiMap::zero(1, d, d);
    let mu2 = crate::tensor::mu_multimap(a);
    GradedAInf::new(space, vec![mu1, mu2], k_max).expect("associative algebras satisfy the identities")
}

/// Embed a 2-term structure into the graded encoding (degrees 0 and 1),
/// together with its operator when given.
pub fn two_term_to_graded(t: &TwoTermAInf, op: Option<&HomotopyNijOp>) -> Result<(GradedAInf, Option<LinearMap>)> {
    let d0 = t.dim0;
    let d1 = t.dim1;
    let dim = d0 + d1;
    let space = GradedSpace::from_blocks(&[(0, d0), (1, d1)]);
    // mu1 = boundary
    let mut mu1 = MultiMap::zero(1, dim, dim);
    {
        let mut entries = mu1.into_vector();
        for u in 0..d1 {
            for r in 0..d0 {
                entries[r * dim + (d0 + u)] = t.bdry.entry(r, u).clone();
            }
        }
        mu1 = MultiMap::from_vector(1, dim, dim, entries)?;
    }
    let mu2 = MultiMap::from_fn(2, dim, dim, |s| {
        let mut out = vec![scalar::zero(); dim];
        let (i, j) = (s[0], s[1]);
        if i < d0 && j < d0 {
            let v = t.mu2_00(&t.b0(i), &t.b0(j));
            out[..d0].clone_from_slice(&v);
        } else if i < d0 {
            let v = t.mu2_01(&t.b0(i), &t.b1(j - d0));
            out[d0..].clone_from_slice(&v);
        } else if j < d0 {
            let v = t.mu2_10(&t.b1(i - d0), &t.b0(j));
            out[d0..].clone_from_slice(&v);
        }
        out
    });
    let mu3 = MultiMap::from_fn(3, dim, dim, |s| {
        let mut out = vec![scalar::zero(); dim];
        if s.iter().all(|&i| i < d0) {
            let v = t.mu3(&t.b0(s[0]), &t.b0(s[1]), &t.b0(s[2]));
            out[d0..].clone_from_slice(&v);
        }
        out
    });
    let g = GradedAInf::new(space, vec![mu1, mu2, mu3], 4)?;
    let n = op.map(|o| o.n0.direct_sum(&o.n1));
    Ok((g, n))
}

/// The strict homotopy Nijenhuis identity for a degree-0 operator, for
/// every stored arity on all basis tuples.
pub fn verify_strict_hn(g: &GradedAInf, n_op: &LinearMap) -> Report {
    let dim = g.dim();
    let mut law = LawChecker::new("strict-hn");
    if n_op.rows() != dim || n_op.cols() != dim {
        law.check(&[], vec![scalar::one()], vec![scalar::zero()]);
        return law.into_report();
    }
    // degree-0 check
    let mut deg_law = LawChecker::new("strict-hn-degree");
    for r in 0..dim {
        for c in 0..dim {
            if !scalar::is_zero(n_op.entry(r, c)) && g.space.degree(r) != g.space.degree(c) {
                deg_law.check(&[r, c], vec![n_op.entry(r, c).clone()], vec![scalar::zero()]);
            }
        }
    }
    let n_cols: Vec<Vec<Scalar>> = (0..dim).map(|j| n_op.column(j)).collect();
    for n in 1..=g.arity_cap() {
        let Some(mu) = g.op(n) else { continue };
        let n_pows: Vec<LinearMap> = (0..n as u32).map(|s| n_op.pow(s)).collect();
        for tuple in tuples(dim, n) {
            // lhs: mu_n(N a_1, ..., N a_n)
            let args: Vec<Arg> = tuple.iter().map(|&i| Arg::Vector(&n_cols[i])).collect();
            let lhs = mu.eval_args(&args);
            // rhs: N( sum over nonempty subsets )
            let mut inner = vec![scalar::zero(); dim];
            for mask in 1u32..(1 << n) {
                let plain = mask.count_ones() as usize;
                let args: Vec<Arg> = tuple
                    .iter()
                    .enumerate()
                    .map(|(pos, &i)| {
                        if mask & (1 << pos) != 0 {
                            Arg::Basis(i)
                        } else {
                            Arg::Vector(&n_cols[i])
                        }
                    })
                    .collect();
                let val = n_pows[plain - 1].apply(&mu.eval_args(&args));
                let sign = signs::strict_hn_subset(plain);
                for (x, v) in inner.iter_mut().zip(val) {
                    *x += v * &sign;
                }
            }
            law.check(&tuple, lhs, n_op.apply(&inner));
        }
    }
    deg_law.into_report().merge(law.into_report())
}

// ---------------------------------------------------------------------------
// NS-infinity algebras
// ---------------------------------------------------------------------------

/// Labeled graded operations `eta_n`: one component for arity 1, `n + 1`
/// components otherwise. Missing labels evaluate to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NsInfAlgebra {
    space: GradedSpace,
    /// `eta[n-1]` = components of the arity-`n` operation
    eta: Vec<Vec<MultiMap>>,
    k_max: usize,
}

impl NsInfAlgebra {
    pub fn from_parts(space: GradedSpace, eta: Vec<Vec<MultiMap>>, k_max: usize) -> Result<Self> {
        let dim = space.dim();
        for (idx, comps) in eta.iter().enumerate() {
            let n = idx + 1;
            let want = if n == 1 { 1 } else { n + 1 };
            if comps.len() != want {
                return Err(EngineError::Dimension(format!(
                    "eta_{n} needs {want} components, got {}",
                    comps.len()
                )));
            }
            for c in comps {
                if c.arity() != n || c.source_dim() != dim || c.target_dim() != dim {
                    return Err(EngineError::Dimension(format!(
                        "eta_{n} components must be arity-{n} maps on the space"
                    )));
                }
            }
        }
        Ok(NsInfAlgebra { space, eta, k_max })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn arity_cap(&self) -> usize {
        self.eta.len()
    }

    pub fn components(&self, n: usize) -> Option<&[MultiMap]> {
        self.eta.get(n - 1).map(Vec::as_slice)
    }

    fn eval_label(&self, n: usize, r: usize, args: &[Arg]) -> Vec<Scalar> {
        match self.eta.get(n - 1).and_then(|c| c.get(r - 1)) {
            Some(map) => map.eval_args(args),
            None => vec![scalar::zero(); self.dim()],
        }
    }

    fn eval_total(&self, n: usize, args: &[Arg]) -> Vec<Scalar> {
        let mut out = vec![scalar::zero(); self.dim()];
        if let Some(comps) = self.eta.get(n - 1) {
            for c in comps {
                for (x, v) in out.iter_mut().zip(c.eval_args(args)) {
                    *x += v;
                }
            }
        }
        out
    }

    /// Component sums `eta-bar_n`, which must form an A-infinity structure.
    pub fn component_sums(&self) -> Vec<MultiMap> {
        let dim = self.dim();
        self.eta
            .iter()
            .enumerate()
            .map(|(idx, comps)| {
                let n = idx + 1;
                let mut total = MultiMap::zero(n, dim, dim);
                for c in comps {
                    total = total.add(c);
                }
                total
            })
            .collect()
    }

    fn prefix_degree(&self, tuple: &[usize]) -> i64 {
        tuple.iter().map(|&i| self.space.degree(i)).sum()
    }

    /// Graded partial composition `(eta_m o_i eta_n)([r]; a_1..a_k)` with
    /// the Koszul insertion sign, by the labeled case table.
    fn graded_composition(
        &self,
        m: usize,
        n: usize,
        i: usize,
        r: usize,
        tuple: &[usize],
    ) -> Vec<Scalar> {
        let k = m + n - 1;
        debug_assert_eq!(tuple.len(), k);
        let inner_tuple = &tuple[i - 1..i - 1 + n];
        let inner_args: Vec<Arg> = inner_tuple.iter().map(|&b| Arg::Basis(b)).collect();
        let outer = |label: usize, inner: &[Scalar]| -> Vec<Scalar> {
            if scalar::all_zero(inner) {
                return vec![scalar::zero(); self.dim()];
            }
            let mut args: Vec<Arg> = Vec::with_capacity(m);
            for &b in &tuple[..i - 1] {
                args.push(Arg::Basis(b));
            }
            args.push(Arg::Vector(inner));
            for &b in &tuple[i - 1 + n..] {
                args.push(Arg::Basis(b));
            }
            self.eval_label(m, label, &args)
        };
        let koszul = signs::graded_insertion(n, self.prefix_degree(&tuple[..i - 1]));
        let value = if k == 1 {
            outer(1, &self.eval_total(n, &inner_args))
        } else if r <= i - 1 {
            outer(r, &self.eval_total(n, &inner_args))
        } else if r <= i + n - 1 {
            outer(i, &self.eval_label(n, r - i + 1, &inner_args))
        } else if r <= m + n - 1 {
            outer(r - n + 1, &self.eval_total(n, &inner_args))
        } else {
            let mut out = outer(i, &self.eval_label(n, n + 1, &inner_args));
            for (x, v) in out
                .iter_mut()
                .zip(outer(m + 1, &self.eval_total(n, &inner_args)))
            {
                *x += v;
            }
            out
        };
        value.into_iter().map(|v| v * &koszul).collect()
    }

    /// The NS-infinity identities for `k <= k_max`, all labels, all
    /// homogeneous basis tuples.
    pub fn verify(&self) -> Report {
        let dim = self.dim();
        let mut law = LawChecker::new("nsinf-identity");
        for k in 1..=self.k_max {
            let labels = if k == 1 { 1 } else { k + 1 };
            for tuple in tuples(dim, k) {
                for r in 1..=labels {
                    let mut total = vec![scalar::zero(); dim];
                    for n in 1..=k {
                        let m = k + 1 - n;
                        if m < 1 || m > self.eta.len() || n > self.eta.len() {
                            continue;
                        }
                        for i in 1..=m {
                            let sign = signs::nsinf(i, n);
                            let val = self.graded_composition(m, n, i, r, &tuple);
                            for (x, v) in total.iter_mut().zip(val) {
                                *x += v * &sign;
                            }
                        }
                    }
                    let mut at = vec![r];
                    at.extend_from_slice(&tuple);
                    law.check(&at, total, vec![scalar::zero(); dim]);
                }
            }
        }
        law.into_report()
    }
}

/// The NS-infinity algebra induced by a strict homotopy Nijenhuis operator:
/// `eta_n([r]; a) = mu_n(N a_1, ..., a_r, ..., N a_n)` for `r <= n` and the
/// alternating power sum for `r = n + 1`.
pub fn induced_nsinf(g: &GradedAInf, n_op: &LinearMap) -> Result<NsInfAlgebra> {
    let hn = verify_strict_hn(g, n_op);
    if !hn.ok {
        return Err(EngineError::invalid("strict homotopy Nijenhuis operator", hn));
    }
    let dim = g.dim();
    let n_cols: Vec<Vec<Scalar>> = (0..dim).map(|j| n_op.column(j)).collect();
    let mut eta = Vec::new();
    for n in 1..=g.arity_cap() {
        let mu = g.op(n).expect("within cap");
        let comps_count = if n == 1 { 1 } else { n + 1 };
        let mut comps = Vec::with_capacity(comps_count);
        for r in 1..=comps_count {
            let comp = MultiMap::from_fn(n, dim, dim, |tuple: &[usize]| {
                if r <= n {
                    let args: Vec<Arg> = tuple
                        .iter()
                        .enumerate()
                        .map(|(pos, &i)| {
                            if pos + 1 == r {
                                Arg::Basis(i)
                            } else {
                                Arg::Vector(&n_cols[i])
                            }
                        })
                        .collect();
                    mu.eval_args(&args)
                } else {
                    // r = n + 1: sum over subsets of at least two plain slots
                    let mut out = vec![scalar::zero(); dim];
                    for mask in 1u32..(1 << n) {
                        let plain = mask.count_ones() as usize;
                        if plain < 2 {
                            continue;
                        }
                        let args: Vec<Arg> = tuple
                            .iter()
                            .enumerate()
                            .map(|(pos, &i)| {
                                if mask & (1 << pos) != 0 {
                                    Arg::Basis(i)
                                } else {
                                    Arg::Vector(&n_cols[i])
                                }
                            })
                            .collect();
                        let val = n_op.pow((plain - 1) as u32).apply(&mu.eval_args(&args));
                        let sign = signs::strict_hn_subset(plain);
                        for (x, v) in out.iter_mut().zip(val) {
                            *x += v * &sign;
                        }
                    }
                    out
                }
            });
            comps.push(comp);
        }
        eta.push(comps);
    }
    let out = NsInfAlgebra::from_parts(g.space().clone(), eta, g.k_max())?;
    let report = out.verify();
    if !report.ok {
        return Err(EngineError::invalid("induced NS-infinity algebra", report));
    }
    Ok(out)
}

/// The deformed A-infinity structure `mu_{n,N}`; for an arity-0-concentrated
/// input this is the deformed associative product.
pub fn deformed_ainf(g: &GradedAInf, n_op: &LinearMap) -> Result<GradedAInf> {
    let hn = verify_strict_hn(g, n_op);
    if !hn.ok {
        return Err(EngineError::invalid("strict homotopy Nijenhuis operator", hn));
    }
    let dim = g.dim();
    let n_cols: Vec<Vec<Scalar>> = (0..dim).map(|j| n_op.column(j)).collect();
    let mut ops = Vec::new();
    for n in 1..=g.arity_cap() {
        let mu = g.op(n).expect("within cap");
        if n == 1 {
            ops.push(mu.clone());
            continue;
        }
        let op = MultiMap::from_fn(n, dim, dim, |tuple: &[usize]| {
            let mut out = vec![scalar::zero(); dim];
            for mask in 1u32..(1 << n) {
                let plain = mask.count_ones() as usize;
                let args: Vec<Arg> = tuple
                    .iter()
                    .enumerate()
                    .map(|(pos, &i)| {
                        if mask & (1 << pos) != 0 {
                            Arg::Basis(i)
                        } else {
                            Arg::Vector(&n_cols[i])
                        }
                    })
                    .collect();
                let val = n_op.pow((plain - 1) as u32).apply(&mu.eval_args(&args));
                let sign = signs::strict_hn_subset(plain);
                for (x, v) in out.iter_mut().zip(val) {
                    *x += v * &sign;
                }
            }
            out
        });
        ops.push(op);
    }
    GradedAInf::new(g.space().clone(), ops, g.k_max())
}

// ---------------------------------------------------------------------------
// Representations, semidirect products and Rota-Baxter lifts
// ---------------------------------------------------------------------------

/// A representation of a graded A-infinity algebra, given by operations
/// `nu_n` over the combined space `A (+) M` supported on tuples with exactly
/// one argument in `M`, landing in `M`.
#[derive(Clone, Debug)]
pub struct GradedRep {
    m_space: GradedSpace,
    nu: Vec<MultiMap>,
}

impl GradedRep {
    pub fn from_parts(g: &GradedAInf, m_space: GradedSpace, nu: Vec<MultiMap>) -> Result<Self> {
        let da = g.dim();
        let dm = m_space.dim();
        let total = da + dm;
        if nu.len() != g.arity_cap() {
            return Err(EngineError::Dimension(format!(
                "representation needs {} operations, got {}",
                g.arity_cap(),
                nu.len()
            )));
        }
        for (idx, op) in nu.iter().enumerate() {
            let n = idx + 1;
            if op.arity() != n || op.source_dim() != total || op.target_dim() != total {
                return Err(EngineError::Dimension(format!(
                    "nu_{n} must be an arity-{n} map on the combined space"
                )));
            }
            // support: exactly one argument in M, output in M
            for (flat, tuple) in tuples(total, n).enumerate() {
                let m_args = tuple.iter().filter(|&&i| i >= da).count();
                for k in 0..total {
                    let v = &op.as_vector()[k * total.pow(n as u32) + flat];
                    if scalar::is_zero(v) {
                        continue;
                    }
                    if m_args != 1 || k < da {
                        return Err(EngineError::Structure(format!(
                            "nu_{n} must be supported on single-module tuples into the module (violated at {tuple:?} -> {k})"
                        )));
                    }
                }
            }
        }
        Ok(GradedRep { m_space, nu })
    }

    /// Adjoint representation: `M = A` with `nu = mu` acting through the
    /// module copy.
    pub fn adjoint(g: &GradedAInf) -> GradedRep {
        let da = g.dim();
        let total = 2 * da;
        let nu = (1..=g.arity_cap())
            .map(|n| {
                let mu = g.op(n).expect("within cap");
                MultiMap::from_fn(n, total, total, |tuple: &[usize]| {
                    let mut out = vec![scalar::zero(); total];
                    let m_positions: Vec<usize> =
                        tuple.iter().enumerate().filter(|(_, &i)| i >= da).map(|(p, _)| p).collect();
                    if m_positions.len() == 1 {
                        let folded: Vec<usize> =
                            tuple.iter().map(|&i| if i >= da { i - da } else { i }).collect();
                        let v = mu.eval_basis(&folded);
                        out[da..].clone_from_slice(&v);
                    }
                    out
                })
            })
            .collect();
        GradedRep {
            m_space: g.space().clone(),
            nu,
        }
    }

    pub fn module_space(&self) -> &GradedSpace {
        &self.m_space
    }
}

/// Semidirect product A-infinity structure on `A (+) M`:
/// `mu^x(a_i + u_i) = (mu_n(a), sum_r nu_n(a_1, .., u_r, .., a_n))`.
/// Construction verifies the identities, which is exactly the representation
/// condition.
pub fn ainf_semidirect(g: &GradedAInf, rep: &GradedRep) -> Result<GradedAInf> {
    let rep = GradedRep::from_parts(g, rep.m_space.clone(), rep.nu.clone())?;
    let da = g.dim();
    let total = da + rep.m_space.dim();
    let space = g.space().concat(&rep.m_space);
    let mut ops = Vec::new();
    for n in 1..=g.arity_cap() {
        let mu = g.op(n).expect("within cap");
        let nu = &rep.nu[n - 1];
        let op = MultiMap::from_fn(n, total, total, |tuple: &[usize]| {
            let m_args = tuple.iter().filter(|&&i| i >= da).count();
            let mut out = vec![scalar::zero(); total];
            if m_args == 0 {
                let folded: Vec<usize> = tuple.to_vec();
                let v = mu.eval_basis(&folded);
                out[..da].clone_from_slice(&v);
            } else if m_args == 1 {
                let v = nu.eval_basis(tuple);
                out.clone_from_slice(&v);
            }
            out
        });
        ops.push(op);
    }
    GradedAInf::new(space, ops, g.k_max())
}

/// Strict homotopy relative Rota-Baxter condition for `R : M -> A`
/// (degree 0), checked directly:
/// `mu_n(R u_1, ..., R u_n) = sum_r R(nu_n(R u_1, ..., u_r, ..., R u_n))`.
pub fn is_strict_homotopy_rb(g: &GradedAInf, rep: &GradedRep, r_map: &LinearMap) -> Result<bool> {
    let da = g.dim();
    let dm = rep.m_space.dim();
    if r_map.rows() != da || r_map.cols() != dm {
        return Err(EngineError::Dimension("R must map M into A".into()));
    }
    let total = da + dm;
    // R u as a combined-space vector supported on the A block
    let r_cols: Vec<Vec<Scalar>> = (0..dm)
        .map(|u| {
            let mut v = vec![scalar::zero(); total];
            let img = r_map.column(u);
            v[..da].clone_from_slice(&img);
            v
        })
        .collect();
    for n in 1..=g.arity_cap() {
        let mu = g.op(n).expect("within cap");
        let nu = &rep.nu[n - 1];
        for tuple in tuples(dm, n) {
            // lhs: mu_n(R u_1, ..., R u_n) over A
            let a_args: Vec<Vec<Scalar>> = tuple.iter().map(|&u| r_map.column(u)).collect();
            let args: Vec<Arg> = a_args.iter().map(|v| Arg::Vector(v)).collect();
            let lhs = mu.eval_args(&args);
            // rhs: sum_r R(nu_n(R u_1, ..., u_r, ..., R u_n))
            let mut rhs = vec![scalar::zero(); da];
            for pos in 0..n {
                let args: Vec<Arg> = tuple
                    .iter()
                    .enumerate()
                    .map(|(p, &u)| {
                        if p == pos {
                            Arg::Basis(da + u)
                        } else {
                            Arg::Vector(&r_cols[u])
                        }
                    })
                    .collect();
                let val = nu.eval_args(&args);
                let m_part: Vec<Scalar> = val[da..].to_vec();
                for (x, v) in rhs.iter_mut().zip(r_map.apply(&m_part)) {
                    *x += v;
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lift `R : M -> A` to `(a, u) -> (R u, 0)` on the semidirect product and
/// test the lift for the strict homotopy Nijenhuis identity.
pub fn rb_lift(g: &GradedAInf, rep: &GradedRep, r_map: &LinearMap) -> Result<(LinearMap, bool)> {
    let semidirect = ainf_semidirect(g, rep)?;
    let da = g.dim();
    let dm = rep.m_space.dim();
    if r_map.rows() != da || r_map.cols() != dm {
        return Err(EngineError::Dimension("R must map M into A".into()));
    }
    let total = da + dm;
    let mut lift = LinearMap::zero(total, total);
    for u in 0..dm {
        for r in 0..da {
            lift.set(r, da + u, r_map.entry(r, u).clone());
        }
    }
    let ok = verify_strict_hn(&semidirect, &lift).ok;
    Ok((lift, ok))
}

// ---------------------------------------------------------------------------
// Verify dispatcher
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomotopyKind {
    TwoTermAInf,
    HomotopyNij,
    CrossedModule,
    GradedAInf,
    StrictHn,
    NsInf,
}

impl HomotopyKind {
    pub fn name(self) -> &'static str {
        match self {
            HomotopyKind::TwoTermAInf => "two-term-ainf",
            HomotopyKind::HomotopyNij => "homotopy-nij",
            HomotopyKind::CrossedModule => "crossed-module",
            HomotopyKind::GradedAInf => "graded-ainf",
            HomotopyKind::StrictHn => "strict-hn",
            HomotopyKind::NsInf => "nsinf",
        }
    }
}
