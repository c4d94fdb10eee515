//! Every graded sign in the engine, transcribed literally from the displayed
//! formulas and kept in one place. Positions `i` and arities `m`, `n` are the
//! paper-style 1-based quantities; degree sums are ordinary integers.

use crate::scalar::{sign_pow, Scalar};

/// Contraction `i_g f`: insertion at position `i` carries `(-1)^{(i-1)(n-1)}`
/// for `g` of arity `n`.
pub fn contraction(i: usize, n: usize) -> Scalar {
    sign_pow(((i - 1) * (n - 1)) as i64)
}

/// Cup bracket `[f,g] = f u g - (-1)^{mn} g u f`.
pub fn cup_transposition(m: usize, n: usize) -> Scalar {
    sign_pow((m * n) as i64)
}

/// Frohlicher-Nijenhuis bracket, second term `(-1)^m i_{(delta f)} g`.
pub fn fn_contraction_f(m: usize) -> Scalar {
    sign_pow(m as i64)
}

/// Frohlicher-Nijenhuis bracket, third term `-(-1)^{(m+1)n} i_{(delta g)} f`.
pub fn fn_contraction_g(m: usize, n: usize) -> Scalar {
    -sign_pow(((m + 1) * n) as i64)
}

/// Hochschild coboundary, interior term `(-1)^i f(..., a_i.a_{i+1}, ...)`.
pub fn hochschild_interior(i: usize) -> Scalar {
    sign_pow(i as i64)
}

/// Hochschild coboundary, last term `(-1)^{n+1} f(...) <| a_{n+1}`.
pub fn hochschild_last(n: usize) -> Scalar {
    sign_pow((n + 1) as i64)
}

/// Operator differential, last outer term `-(-1)^n f(...) <| N(a_{n+1})`.
pub fn operator_last(n: usize) -> Scalar {
    -sign_pow(n as i64)
}

/// `partial^{N,N_M}`: the term leaving the positions of `S` undecorated
/// carries `(-1)^{|S|} N_M^{|S|}`.
pub fn partial_subset(plain: usize) -> Scalar {
    sign_pow(plain as i64)
}

/// Mapping-cone differential: `d(chi, F) = (..., d F + (-1)^n partial chi)`.
pub fn cone_partial(n: usize) -> Scalar {
    sign_pow(n as i64)
}

/// First sum of the labeled bracket `[[f, g]]`.
pub fn ns_bracket_first(i: usize, n: usize) -> Scalar {
    sign_pow(((i - 1) * (n - 1)) as i64)
}

/// Flip factor `-(-1)^{(m-1)(n-1)}` in front of the second sum.
pub fn ns_bracket_flip(m: usize, n: usize) -> Scalar {
    -sign_pow(((m - 1) * (n - 1)) as i64)
}

/// Second sum of the labeled bracket: `(-1)^{(i-1)(m-1)} g o_i f`.
pub fn ns_bracket_second(i: usize, m: usize) -> Scalar {
    sign_pow(((i - 1) * (m - 1)) as i64)
}

/// NS differential `delta_pi(f) = (-1)^{n-1} [[pi, f]]`.
pub fn ns_differential(n: usize) -> Scalar {
    sign_pow((n - 1) as i64)
}

/// Theta, `r = 1` component: `(-1)^{n+1} a_1 . f(...)`.
pub fn theta_first(n: usize) -> Scalar {
    sign_pow((n + 1) as i64)
}

/// Theta, `r = n+2` component: `(-1)^{n+i+1} f(..., a_i.a_{i+1}, ...)`.
pub fn theta_interior(n: usize, i: usize) -> Scalar {
    sign_pow((n + i + 1) as i64)
}

/// `Psi_n(f) = (-1)^{n+1} delta_Hoch f`.
pub fn psi(n: usize) -> Scalar {
    sign_pow((n + 1) as i64)
}

/// A-infinity identity: `(-1)^{i(n+1) + n(|a_1| + ... + |a_{i-1}|)}`.
pub fn ainf(i: usize, n: usize, deg_prefix: i64) -> Scalar {
    sign_pow((i * (n + 1)) as i64 + n as i64 * deg_prefix)
}

/// NS-infinity identity: `(-1)^{i(n+1)}` in front of `eta_m o_i eta_n`.
pub fn nsinf(i: usize, n: usize) -> Scalar {
    sign_pow((i * (n + 1)) as i64)
}

/// Koszul factor carried by graded partial compositions:
/// `(-1)^{n(|a_1| + ... + |a_{i-1}|)}`.
pub fn graded_insertion(n: usize, deg_prefix: i64) -> Scalar {
    sign_pow(n as i64 * deg_prefix)
}

/// Strict homotopy Nijenhuis identity: the term with `plain` undecorated
/// arguments carries `(-1)^{plain-1} N^{plain-1}` inside the outer `N`.
pub fn strict_hn_subset(plain: usize) -> Scalar {
    sign_pow(plain as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, one};

    #[test]
    fn contraction_table() {
        // arity-1 insertions are always positive
        assert_eq!(contraction(1, 1), one());
        assert_eq!(contraction(5, 1), one());
        // first insertion always positive
        assert_eq!(contraction(1, 4), one());
        // (i-1)(n-1) parity
        assert_eq!(contraction(2, 2), -one());
        assert_eq!(contraction(3, 2), one());
        assert_eq!(contraction(2, 3), one());
    }

    #[test]
    fn cup_and_fn_table() {
        assert_eq!(cup_transposition(1, 1), -one());
        assert_eq!(cup_transposition(2, 1), one());
        assert_eq!(fn_contraction_f(1), -one());
        assert_eq!(fn_contraction_f(2), one());
        assert_eq!(fn_contraction_g(1, 1), -one());
        assert_eq!(fn_contraction_g(1, 2), -one());
        assert_eq!(fn_contraction_g(2, 1), one());
    }

    #[test]
    fn hochschild_table() {
        assert_eq!(hochschild_interior(1), -one());
        assert_eq!(hochschild_interior(2), one());
        assert_eq!(hochschild_last(1), one());
        assert_eq!(hochschild_last(2), -one());
        assert_eq!(operator_last(1), one());
        assert_eq!(operator_last(2), -one());
    }

    #[test]
    fn partial_and_cone_table() {
        assert_eq!(partial_subset(0), one());
        assert_eq!(partial_subset(1), -one());
        assert_eq!(partial_subset(2), one());
        assert_eq!(cone_partial(1), -one());
        assert_eq!(cone_partial(2), one());
    }

    #[test]
    fn labeled_bracket_table() {
        assert_eq!(ns_bracket_first(1, 2), one());
        assert_eq!(ns_bracket_first(2, 2), -one());
        assert_eq!(ns_bracket_flip(2, 2), one());
        assert_eq!(ns_bracket_flip(1, 2), -one());
        assert_eq!(ns_bracket_flip(2, 3), -one());
        assert_eq!(ns_bracket_second(2, 3), one());
        assert_eq!(ns_differential(1), one());
        assert_eq!(ns_differential(2), -one());
    }

    #[test]
    fn theta_psi_table() {
        assert_eq!(theta_first(1), one());
        assert_eq!(theta_first(2), -one());
        assert_eq!(theta_interior(1, 1), -one());
        assert_eq!(psi(1), one());
        assert_eq!(psi(2), -one());
    }

    #[test]
    fn graded_tables() {
        assert_eq!(ainf(1, 2, 0), -one());
        assert_eq!(ainf(2, 2, 0), one());
        assert_eq!(ainf(1, 1, 1), -one());
        assert_eq!(ainf(1, 2, 1), -one());
        assert_eq!(nsinf(1, 2), -one());
        assert_eq!(nsinf(2, 1), one());
        assert_eq!(graded_insertion(2, 1), one());
        assert_eq!(graded_insertion(1, 1), -one());
        assert_eq!(strict_hn_subset(1), one());
        assert_eq!(strict_hn_subset(2), -one());
        assert_eq!(int(1), one());
    }
}
