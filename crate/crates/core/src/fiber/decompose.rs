//! Cyclic decomposition of small finite abelian groups given by an
//! addition rule on element indices.

use crate::arith::{p_part, prime_divisors};
use crate::error::{FbrError, Result};

/// A decomposition `G = <g_1> ⊕ .. ⊕ <g_k>` into cyclic groups of
/// prime-power order, with the coordinates of every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub generators: Vec<usize>,
    pub orders: Vec<u64>,
    /// `coords[x][i]` is the coefficient of `g_i` in `x`.
    pub coords: Vec<Vec<u64>>,
}

fn scale(add: &dyn Fn(usize, usize) -> usize, zero: usize, x: usize, k: u64) -> usize {
    let mut r = zero;
    for _ in 0..k {
        r = add(r, x);
    }
    r
}

fn element_order(add: &dyn Fn(usize, usize) -> usize, zero: usize, x: usize) -> u64 {
    let mut k = 1;
    let mut y = x;
    while y != zero {
        y = add(y, x);
        k += 1;
    }
    k
}

/// Decomposes the group on `0..size` with the given zero and addition.
///
/// Works one primary component at a time: repeatedly pick the element of
/// largest order modulo the span built so far, then correct it by an
/// element of the span so that its order equals that coset order.
pub fn decompose(size: usize, zero: usize, add: &dyn Fn(usize, usize) -> usize) -> Result<CyclicDecomposition> {
    let orders: Vec<u64> = (0..size).map(|x| element_order(add, zero, x)).collect();
    let neg = |x: usize| scale(add, zero, x, orders[x] - 1);
    let mut generators = Vec::new();
    let mut gen_orders = Vec::new();
    for p in prime_divisors(size as u64) {
        let primary: Vec<usize> = (0..size)
            .filter(|&x| p_part(orders[x] as usize, p as usize) as u64 == orders[x])
            .collect();
        let mut in_span = vec![false; size];
        in_span[zero] = true;
        let mut span = vec![zero];
        while span.len() < primary.len() {
            let mut best: Option<(u64, usize)> = None;
            for &x in &primary {
                let mut m = 1u64;
                let mut y = x;
                while !in_span[y] {
                    y = scale(add, zero, y, p);
                    m *= p;
                }
                if best.is_none_or(|(bm, _)| m > bm) {
                    best = Some((m, x));
                }
            }
            let (m, x) = best.expect("primary component is nonempty");
            let target = scale(add, zero, x, m);
            let s = span
                .iter()
                .copied()
                .find(|&s| scale(add, zero, s, m) == target)
                .ok_or_else(|| FbrError::invariant("cyclic decomposition: no lift found"))?;
            let y = add(x, neg(s));
            if orders[y] != m {
                return Err(FbrError::invariant("cyclic decomposition: lift has wrong order"));
            }
            let mut next = Vec::with_capacity(span.len() * m as usize);
            let mut mult = zero;
            for _ in 0..m {
                for &s in &span {
                    let z = add(s, mult);
                    if in_span[z] && mult != zero {
                        return Err(FbrError::invariant("cyclic decomposition: sum not direct"));
                    }
                    next.push(z);
                }
                mult = add(mult, y);
            }
            for &z in &next {
                in_span[z] = true;
            }
            span = next;
            generators.push(y);
            gen_orders.push(m);
        }
    }
    let mut coords = vec![Vec::new(); size];
    let total: u64 = gen_orders.iter().product();
    if total != size as u64 {
        return Err(FbrError::invariant("cyclic decomposition: orders do not multiply to |G|"));
    }
    for idx in 0..total {
        let mut rem = idx;
        let mut c = Vec::with_capacity(generators.len());
        let mut x = zero;
        for (&g, &o) in generators.iter().zip(&gen_orders) {
            let k = rem % o;
            rem /= o;
            c.push(k);
            x = add(x, scale(add, zero, g, k));
        }
        coords[x] = c;
    }
    if size > 1 && coords.iter().any(|c| c.is_empty()) {
        return Err(FbrError::invariant("cyclic decomposition: coordinates incomplete"));
    }
    Ok(CyclicDecomposition {
        generators,
        orders: gen_orders,
        coords,
    })
}
