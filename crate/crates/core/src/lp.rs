//! A small exact primal simplex for the feasibility and separation problems
//! that come up with fans (projectivity, extremality, cone membership).

use num_traits::{Signed, Zero};

use crate::arith::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Unbounded,
}

/// Maximizes `c . x` subject to `a x <= b`, `x >= 0`, for `b >= 0`.
///
/// The origin is feasible by the sign requirement on `b`, so only phase two
/// runs. Bland's rule rules out cycling.
pub fn maximize(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m);
    assert!(b.iter().all(|x| !x.is_negative()), "right-hand side must be nonnegative");
    let width = n + m;
    // tableau rows: coefficients over (x, slack), then rhs
    let mut t: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..m).map(|j| if i == j { Rat::from_integer(1.into()) } else { Rat::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();
    // reduced costs: z_j - c_j; optimal when all >= 0
    let mut obj: Vec<Rat> = c.iter().map(|x| -x).collect();
    obj.extend((0..=m).map(|_| Rat::zero()));

    loop {
        let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][width] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let Some(l) = leave else {
            return LpOutcome::Unbounded;
        };
        let inv = t[l][enter].recip();
        for x in t[l].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = t[l].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == l || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &f * p;
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&pivot) {
                *x -= &f * p;
            }
        }
        basis[l] = enter;
    }

    let mut x = vec![Rat::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width].clone();
        }
    }
    LpOutcome::Optimal {
        value: obj[width].clone(),
        x,
    }
}

/// Maximizes `t` over `(v, t)` with `v` in the box `[-1, 1]^d`, `0 <= t <= 1`
/// and `rows_ge[i] . v >= t`, `rows_eq[i] . v = 0`.
///
/// Returns the optimum `t` together with an optimal `v`. A positive optimum
/// certifies a vector strictly positive on every `rows_ge` row.
pub fn max_min_slack(rows_ge: &[Vec<Rat>], rows_eq: &[Vec<Rat>], d: usize) -> (Rat, Vec<Rat>) {
    // variables: v+ (d), v- (d), t (1)
    let nv = 2 * d + 1;
    let one = Rat::from_integer(1.into());
    let mut a = Vec::new();
    let mut b = Vec::new();
    for row in rows_ge {
        // -(row . v) + t <= 0
        let mut r = vec![Rat::zero(); nv];
        for k in 0..d {
            r[k] = -row[k].clone();
            r[d + k] = row[k].clone();
        }
        r[2 * d] = one.clone();
        a.push(r);
        b.push(Rat::zero());
    }
    for row in rows_eq {
        let mut pos = vec![Rat::zero(); nv];
        let mut neg = vec![Rat::zero(); nv];
        for k in 0..d {
            pos[k] = row[k].clone();
            pos[d + k] = -row[k].clone();
            neg[k] = -row[k].clone();
            neg[d + k] = row[k].clone();
        }
        a.push(pos);
        b.push(Rat::zero());
        a.push(neg);
        b.push(Rat::zero());
    }
    for k in 0..nv {
        let mut r = vec![Rat::zero(); nv];
        r[k] = one.clone();
        a.push(r);
        b.push(one.clone());
    }
    let mut c = vec![Rat::zero(); nv];
    c[2 * d] = one;
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, x } => {
            let v = (0..d).map(|k| &x[k] - &x[d + k]).collect();
            (value, v)
        }
        LpOutcome::Unbounded => unreachable!("box-bounded program cannot be unbounded"),
    }
}
