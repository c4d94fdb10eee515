//! Multilinear maps `A^{(x)n} -> W` as exact coefficient tensors, and the
//! graded operations built on them: contraction, cup product, cup bracket,
//! the Hochschild coboundary and the Frohlicher-Nijenhuis bracket.
//!
//! Flattening convention, normative for every matrix in the engine: the
//! source tuple `(i_1, ..., i_n)` flattens to
//! `i_1 d^{n-1} + i_2 d^{n-2} + ... + i_n` (leftmost factor most
//! significant), and a multimap becomes the vector `k * d^n + flat` (target
//! index major).

use crate::algebra::{Algebra, Bimodule, LinearMap};
use crate::error::{EngineError, Result};
use crate::scalar::{self, Scalar};
use crate::signs;

/// A multilinear map of the given arity from a `source_dim`-dimensional
/// algebra into a `target_dim`-dimensional space. Arity 0 encodes a plain
/// element of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    arity: usize,
    source_dim: usize,
    target_dim: usize,
    entries: Vec<Scalar>,
}

/// Argument to a mixed evaluation: a basis index or a coefficient vector.
pub enum Arg<'a> {
    Basis(usize),
    Vector(&'a [Scalar]),
}

/// Iterate all `d^n` basis tuples in flat order.
pub fn tuples(d: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = d.checked_pow(n as u32).expect("tuple space fits in usize");
    (0..total).map(move |mut flat| {
        let mut t = vec![0usize; n];
        for slot in (0..n).rev() {
            t[slot] = flat % d;
            flat /= d;
        }
        t
    })
}

pub fn flat_index(d: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * d + i)
}

impl MultiMap {
    pub fn zero(arity: usize, source_dim: usize, target_dim: usize) -> Self {
        let n = target_dim * source_dim.pow(arity as u32);
        MultiMap {
            arity,
            source_dim,
            target_dim,
            entries: vec![scalar::zero(); n],
        }
    }

    /// The basis map sending the single tuple to the target basis vector
    /// `k`, all other tuples to zero.
    pub fn basis(arity: usize, source_dim: usize, target_dim: usize, k: usize, tuple: &[usize]) -> Self {
        assert_eq!(tuple.len(), arity);
        let mut m = MultiMap::zero(arity, source_dim, target_dim);
        let flat = flat_index(source_dim, tuple);
        m.entries[k * source_dim.pow(arity as u32) + flat] = scalar::one();
        m
    }

    pub fn from_fn(
        arity: usize,
        source_dim: usize,
        target_dim: usize,
        mut f: impl FnMut(&[usize]) -> Vec<Scalar>,
    ) -> Self {
        let mut m = MultiMap::zero(arity, source_dim, target_dim);
        let block = source_dim.pow(arity as u32);
        for (flat, tuple) in tuples(source_dim, arity).enumerate() {
            let val = f(&tuple);
            assert_eq!(val.len(), target_dim);
            for (k, v) in val.into_iter().enumerate() {
                m.entries[k * block + flat] = v;
            }
        }
        m
    }

    /// Arity-0 element of the target.
    pub fn element(source_dim: usize, value: &[Scalar]) -> Self {
        MultiMap {
            arity: 0,
            source_dim,
            target_dim: value.len(),
            entries: value.to_vec(),
        }
    }

    pub fn identity(d: usize) -> Self {
        MultiMap::from_linear_map(&LinearMap::identity(d), d)
    }

    /// Arity-1 map from a matrix; `source_dim` names the algebra the map is
    /// a cochain over (its column count).
    pub fn from_linear_map(m: &LinearMap, source_dim: usize) -> Self {
        assert_eq!(m.cols(), source_dim);
        let mut out = MultiMap::zero(1, source_dim, m.rows());
        for k in 0..m.rows() {
            for j in 0..source_dim {
                out.entries[k * source_dim + j] = m.entry(k, j).clone();
            }
        }
        out
    }

    pub fn to_linear_map(&self) -> LinearMap {
        assert_eq!(self.arity, 1, "only arity-1 multimaps are matrices");
        let mut m = LinearMap::zero(self.target_dim, self.source_dim);
        for k in 0..self.target_dim {
            for j in 0..self.source_dim {
                m.set(k, j, self.entries[k * self.source_dim + j].clone());
            }
        }
        m
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    fn block(&self) -> usize {
        self.source_dim.pow(self.arity as u32)
    }

    pub fn coefficient(&self, k: usize, tuple: &[usize]) -> &Scalar {
        &self.entries[k * self.block() + flat_index(self.source_dim, tuple)]
    }

    /// Value on a basis tuple, as a target coefficient vector.
    pub fn eval_basis(&self, tuple: &[usize]) -> Vec<Scalar> {
        assert_eq!(tuple.len(), self.arity);
        let flat = flat_index(self.source_dim, tuple);
        let block = self.block();
        (0..self.target_dim)
            .map(|k| self.entries[k * block + flat].clone())
            .collect()
    }

    /// Multilinear evaluation where some arguments are coefficient vectors.
    pub fn eval_args(&self, args: &[Arg]) -> Vec<Scalar> {
        assert_eq!(args.len(), self.arity);
        let d = self.source_dim;
        let block = self.block();
        let mut partial: Vec<(usize, Scalar)> = vec![(0, scalar::one())];
        for arg in args {
            let mut next = Vec::with_capacity(partial.len());
            match arg {
                Arg::Basis(i) => {
                    assert!(*i < d);
                    for (flat, coef) in partial {
                        next.push((flat * d + i, coef));
                    }
                }
                Arg::Vector(v) => {
                    assert_eq!(v.len(), d);
                    for (flat, coef) in &partial {
                        for (i, vi) in v.iter().enumerate() {
                            if !scalar::is_zero(vi) {
                                next.push((flat * d + i, coef * vi));
                            }
                        }
                    }
                }
            }
            partial = next;
        }
        let mut out = vec![scalar::zero(); self.target_dim];
        for (flat, coef) in partial {
            for k in 0..self.target_dim {
                let e = &self.entries[k * block + flat];
                if !scalar::is_zero(e) {
                    out[k] += e * &coef;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &MultiMap) -> MultiMap {
        assert_eq!(self.shape(), other.shape(), "multimap shape mismatch");
        let mut out = self.clone();
        for (x, y) in out.entries.iter_mut().zip(&other.entries) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &MultiMap) -> MultiMap {
        assert_eq!(self.shape(), other.shape(), "multimap shape mismatch");
        let mut out = self.clone();
        for (x, y) in out.entries.iter_mut().zip(&other.entries) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> MultiMap {
        let mut out = self.clone();
        for x in out.entries.iter_mut() {
            *x = &*x * s;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(scalar::is_zero)
    }

    fn shape(&self) -> (usize, usize, usize) {
        (self.arity, self.source_dim, self.target_dim)
    }

    /// Flatten to the normative vector layout `k * d^n + flat`.
    pub fn as_vector(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_vector(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn from_vector(
        arity: usize,
        source_dim: usize,
        target_dim: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self> {
        let want = target_dim * source_dim.pow(arity as u32);
        if entries.len() != want {
            return Err(EngineError::Dimension(format!(
                "cochain vector has {} entries, expected {}",
                entries.len(),
                want
            )));
        }
        Ok(MultiMap {
            arity,
            source_dim,
            target_dim,
            entries,
        })
    }
}

/// The multiplication of an algebra as an arity-2 multimap.
pub fn mu_multimap(a: &Algebra) -> MultiMap {
    let d = a.dim();
    MultiMap::from_fn(2, d, d, |t| a.product_basis(t[0], t[1]).to_vec())
}

fn check_same_source(f: &MultiMap, g: &MultiMap) -> Result<()> {
    if f.source_dim() != g.source_dim() {
        return Err(EngineError::Dimension(
            "multimaps over different source algebras".into(),
        ));
    }
    Ok(())
}

/// Contraction `i_g f` of `f` (arity m) by `g` (arity n >= 1, target equal
/// to f's source): sum over insertion positions with sign
/// `(-1)^{(i-1)(n-1)}`.
pub fn contraction(f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    check_same_source(f, g)?;
    let (m, n) = (f.arity(), g.arity());
    if m == 0 || n == 0 {
        return Err(EngineError::Structure(
            "contraction needs arities >= 1".into(),
        ));
    }
    if g.target_dim() != f.source_dim() {
        return Err(EngineError::Dimension(
            "contraction: target of g must be the source of f".into(),
        ));
    }
    let d = f.source_dim();
    Ok(MultiMap::from_fn(
        m + n - 1,
        d,
        f.target_dim(),
        |t: &[usize]| {
            let mut out = vec![scalar::zero(); f.target_dim()];
            for i in 1..=m {
                let inner = g.eval_basis(&t[i - 1..i - 1 + n]);
                let mut args: Vec<Arg> = Vec::with_capacity(m);
                for &b in &t[..i - 1] {
                    args.push(Arg::Basis(b));
                }
                args.push(Arg::Vector(&inner));
                for &b in &t[i - 1 + n..] {
                    args.push(Arg::Basis(b));
                }
                let sign = signs::contraction(i, n);
                for (x, v) in out.iter_mut().zip(f.eval_args(&args)) {
                    *x += v * &sign;
                }
            }
            out
        },
    ))
}

/// Cup product `(f u g)(a_1..a_{m+n}) = f(a_1..a_m) . g(a_{m+1}..a_{m+n})`
/// through the given algebra; both targets must be the algebra itself.
pub fn cup_product(a: &Algebra, f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    check_same_source(f, g)?;
    if f.source_dim() != a.dim() || f.target_dim() != a.dim() || g.target_dim() != a.dim() {
        return Err(EngineError::Dimension(
            "cup product needs adjoint-valued maps over the algebra".into(),
        ));
    }
    let (m, n) = (f.arity(), g.arity());
    Ok(MultiMap::from_fn(m + n, a.dim(), a.dim(), |t| {
        a.product(&f.eval_basis(&t[..m]), &g.eval_basis(&t[m..]))
    }))
}

/// Graded cup bracket `[f,g] = f u g - (-1)^{mn} g u f`.
pub fn cup_bracket(a: &Algebra, f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    let fg = cup_product(a, f, g)?;
    let gf = cup_product(a, g, f)?;
    let sign = signs::cup_transposition(f.arity(), g.arity());
    Ok(fg.sub(&gf.scale(&sign)))
}

/// Hochschild coboundary with coefficients in a bimodule. Arity 0 maps the
/// element `u` to `a |> u - u <| a`.
pub fn hochschild_delta(a: &Algebra, b: &Bimodule, f: &MultiMap) -> Result<MultiMap> {
    if f.source_dim() != a.dim() || f.target_dim() != b.dim() {
        return Err(EngineError::Dimension(
            "hochschild coboundary: cochain must map the algebra into the bimodule".into(),
        ));
    }
    let n = f.arity();
    let d = a.dim();
    Ok(MultiMap::from_fn(n + 1, d, b.dim(), |t| {
        let mut out = b.act_left(&a.basis_vector(t[0]), &f.eval_basis(&t[1..]));
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
            let sign = signs::hochschild_interior(i);
            for (x, v) in out.iter_mut().zip(f.eval_args(&args)) {
                *x += v * &sign;
            }
        }
        let last = b.act_right(&f.eval_basis(&t[..n]), &a.basis_vector(t[n]));
        let sign = signs::hochschild_last(n);
        for (x, v) in out.iter_mut().zip(last) {
            *x += v * &sign;
        }
        out
    }))
}

/// Hochschild coboundary with adjoint coefficients.
pub fn hochschild_delta_adjoint(a: &Algebra, f: &MultiMap) -> Result<MultiMap> {
    hochschild_delta(a, &Bimodule::adjoint(a), f)
}

/// The Frohlicher-Nijenhuis bracket
/// `[f,g]_FN = [f,g]_cup + (-1)^m i_{(delta f)} g - (-1)^{(m+1)n} i_{(delta g)} f`
/// for adjoint-valued maps of arities `m, n >= 1`.
pub fn fn_bracket(a: &Algebra, f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    let (m, n) = (f.arity(), g.arity());
    if m == 0 || n == 0 {
        return Err(EngineError::Structure(
            "the FN bracket needs arities >= 1".into(),
        ));
    }
    let mut out = cup_bracket(a, f, g)?;
    let df = hochschild_delta_adjoint(a, f)?;
    out = out.add(&contraction(g, &df)?.scale(&signs::fn_contraction_f(m)));
    let dg = hochschild_delta_adjoint(a, g)?;
    out = out.add(&contraction(f, &dg)?.scale(&signs::fn_contraction_g(m, n)));
    Ok(out)
}

/// `d_N f = [N, f]_FN` for `f` of arity >= 1, the differential of the
/// operator complex.
pub fn dn_bracket(a: &Algebra, n_op: &LinearMap, f: &MultiMap) -> Result<MultiMap> {
    fn_bracket(a, &MultiMap::from_linear_map(n_op, a.dim()), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{k2, k2_nij, random_linear_map, seeded_rng, t3, t3_nij};
    use crate::scalar::int;
    use rand::Rng;

    fn random_multimap(
        rng: &mut rand_chacha::ChaCha8Rng,
        arity: usize,
        d: usize,
        w: usize,
    ) -> MultiMap {
        MultiMap::from_fn(arity, d, w, |_| {
            (0..w).map(|_| int(rng.gen_range(-2..=2))).collect()
        })
    }

    #[test]
    fn contraction_of_mu_by_mu_vanishes_iff_associative() {
        // i_mu mu = 0 is precisely associativity
        for alg in [k2(), t3()] {
            let mu = mu_multimap(&alg);
            assert!(contraction(&mu, &mu).unwrap().is_zero());
        }
    }

    #[test]
    fn identity_insertions() {
        // i_Id f = m . f
        let mut rng = seeded_rng(11);
        let alg = k2();
        for m in 1..=3usize {
            let f = random_multimap(&mut rng, m, alg.dim(), alg.dim());
            let id = MultiMap::identity(alg.dim());
            let lhs = contraction(&f, &id).unwrap();
            assert_eq!(lhs, f.scale(&int(m as i64)));
        }
        // i_mu Id = mu
        let alg = t3();
        let mu = mu_multimap(&alg);
        let id = MultiMap::identity(alg.dim());
        assert_eq!(contraction(&id, &mu).unwrap(), mu);
    }

    #[test]
    fn cup_product_basics() {
        let alg = k2();
        let id = MultiMap::identity(alg.dim());
        let mu = mu_multimap(&alg);
        assert_eq!(cup_product(&alg, &id, &id).unwrap(), mu);

        // associativity of the cup product on random maps
        let mut rng = seeded_rng(5);
        let f = random_multimap(&mut rng, 1, 2, 2);
        let g = random_multimap(&mut rng, 2, 2, 2);
        let h = random_multimap(&mut rng, 1, 2, 2);
        let lhs = cup_product(&alg, &cup_product(&alg, &f, &g).unwrap(), &h).unwrap();
        let rhs = cup_product(&alg, &f, &cup_product(&alg, &g, &h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);

        // mu cup Id on T3 is the triple product
        let alg = t3();
        let mu = mu_multimap(&alg);
        let id = MultiMap::identity(alg.dim());
        let triple = cup_product(&alg, &mu, &id).unwrap();
        for t in tuples(alg.dim(), 3) {
            let abc = alg.product(
                alg.product_basis(t[0], t[1]),
                &alg.basis_vector(t[2]),
            );
            assert_eq!(triple.eval_basis(&t), abc);
        }
    }

    #[test]
    fn cup_bracket_signs() {
        let alg = k2();
        // even arity: [f, f] = 0
        let mut rng = seeded_rng(9);
        let f = random_multimap(&mut rng, 2, 2, 2);
        assert!(cup_bracket(&alg, &f, &f).unwrap().is_zero());
        // [Id, Id] = 2 mu
        let id = MultiMap::identity(alg.dim());
        let br = cup_bracket(&alg, &id, &id).unwrap();
        assert_eq!(br, mu_multimap(&alg).scale(&int(2)));
    }

    #[test]
    fn hochschild_examples() {
        // delta(Id) = mu
        for alg in [k2(), t3()] {
            let id = MultiMap::identity(alg.dim());
            let delta = hochschild_delta_adjoint(&alg, &id).unwrap();
            assert_eq!(delta, mu_multimap(&alg));
            // delta(mu) = 0 (associativity)
            let mu = mu_multimap(&alg);
            assert!(hochschild_delta_adjoint(&alg, &mu).unwrap().is_zero());
        }
        // arity-0: delta(e1)(a) = a.e1 - e1.a = 0 in the commutative k2
        let alg = k2();
        let u = MultiMap::element(alg.dim(), &[int(0), int(1)]);
        assert!(hochschild_delta_adjoint(&alg, &u).unwrap().is_zero());
    }

    #[test]
    fn delta_squared_zero_on_random_cochains() {
        let mut rng = seeded_rng(3);
        for alg in [k2(), t3()] {
            for arity in 0..=2usize {
                let f = random_multimap(&mut rng, arity, alg.dim(), alg.dim());
                let d1 = hochschild_delta_adjoint(&alg, &f).unwrap();
                let d2 = hochschild_delta_adjoint(&alg, &d1).unwrap();
                assert!(d2.is_zero());
            }
        }
    }

    #[test]
    fn maurer_cartan_examples() {
        // [N, N]_FN = 0 for the fixture operators
        for na in [k2_nij(), t3_nij()] {
            let n = MultiMap::from_linear_map(na.operator(), na.dim());
            assert!(fn_bracket(na.algebra(), &n, &n).unwrap().is_zero());
        }
        // [Id, f]_FN = 0 for random f
        let mut rng = seeded_rng(21);
        for alg in [k2(), t3()] {
            let id = MultiMap::identity(alg.dim());
            for arity in 1..=3usize {
                let f = random_multimap(&mut rng, arity, alg.dim(), alg.dim());
                assert!(fn_bracket(&alg, &id, &f).unwrap().is_zero());
            }
        }
        // the swap on k2 is not Nijenhuis, so [N, N]_FN != 0
        let alg = k2();
        let swap = MultiMap::from_linear_map(&LinearMap::from_int_entries(&[&[0, 1], &[1, 0]]), 2);
        assert!(!fn_bracket(&alg, &swap, &swap).unwrap().is_zero());
    }

    #[test]
    fn fn_bracket_graded_antisymmetry() {
        let mut rng = seeded_rng(2);
        for alg in [k2(), t3()] {
            for (m, n) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3)] {
                let f = random_multimap(&mut rng, m, alg.dim(), alg.dim());
                let g = random_multimap(&mut rng, n, alg.dim(), alg.dim());
                let fg = fn_bracket(&alg, &f, &g).unwrap();
                let gf = fn_bracket(&alg, &g, &f).unwrap();
                assert_eq!(fg, gf.scale(&-signs::cup_transposition(m, n)));
            }
        }
    }

    #[test]
    fn fn_bracket_graded_jacobi() {
        // (-1)^{mp}[f,[g,h]] + (-1)^{nm}[g,[h,f]] + (-1)^{pn}[h,[f,g]] = 0
        let mut rng = seeded_rng(14);
        for alg in [k2(), t3()] {
            for (m, n, p) in [(1, 1, 1), (1, 1, 2)] {
                let f = random_multimap(&mut rng, m, alg.dim(), alg.dim());
                let g = random_multimap(&mut rng, n, alg.dim(), alg.dim());
                let h = random_multimap(&mut rng, p, alg.dim(), alg.dim());
                let t1 = fn_bracket(&alg, &f, &fn_bracket(&alg, &g, &h).unwrap())
                    .unwrap()
                    .scale(&signs::cup_transposition(m, p));
                let t2 = fn_bracket(&alg, &g, &fn_bracket(&alg, &h, &f).unwrap())
                    .unwrap()
                    .scale(&signs::cup_transposition(n, m));
                let t3m = fn_bracket(&alg, &h, &fn_bracket(&alg, &f, &g).unwrap())
                    .unwrap()
                    .scale(&signs::cup_transposition(p, n));
                assert!(t1.add(&t2).add(&t3m).is_zero());
            }
        }
    }

    #[test]
    fn contraction_rejects_arity_zero() {
        let alg = k2();
        let u = MultiMap::element(alg.dim(), &[int(1), int(0)]);
        let id = MultiMap::identity(alg.dim());
        assert!(contraction(&u, &id).is_err());
        assert!(contraction(&id, &u).is_err());
    }
}
