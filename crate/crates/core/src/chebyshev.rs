//! Chebyshev polynomials of the first kind.
//!
//! The `A₁(η)` Type-1 measure is written in terms of `T_x(cos ξ)`; the closed
//! form evaluates it as `cos(xξ)`, and this three-term recurrence gives an
//! independent route to the same numbers.

/// `T_n(u)` by `T_{n+1} = 2u T_n − T_{n−1}`, with `T_{−n} = T_n`.
pub fn chebyshev_t(n: i64, u: f64) -> f64 {
    let n = n.unsigned_abs();
    let (mut prev, mut cur) = (1.0, u);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * u * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}
