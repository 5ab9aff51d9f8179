//! Formal Chern classes of symmetric powers of a rank-2 bundle, as integer
//! polynomials in `c1, c2`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::arith::Int;
use crate::chow::schubert;

/// Integer polynomial in two variables: `(i, j) -> coefficient of x^i y^j`.
/// Used both for `c1^i c2^j` and for root monomials `alpha^i beta^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2(pub BTreeMap<(usize, usize), Int>);

impl Poly2 {
    pub fn one() -> Poly2 {
        Poly2::monomial(0, 0, Int::one())
    }

    pub fn monomial(i: usize, j: usize, c: Int) -> Poly2 {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((i, j), c);
        }
        Poly2(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Int {
        self.0.get(&(i, j)).cloned().unwrap_or_else(Int::zero)
    }

    pub fn add_assign(&mut self, other: &Poly2) {
        for (k, c) in &other.0 {
            *self.0.entry(*k).or_insert_with(Int::zero) += c;
        }
        self.0.retain(|_, c| !c.is_zero());
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out: BTreeMap<(usize, usize), Int> = BTreeMap::new();
        for ((i1, j1), c1) in &self.0 {
            for ((i2, j2), c2) in &other.0 {
                *out.entry((i1 + i2, j1 + j2)).or_insert_with(Int::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly2(out)
    }

    /// Part of weighted degree `k`, with weights `(wx, wy)`.
    pub fn graded_part(&self, k: usize, wx: usize, wy: usize) -> Poly2 {
        Poly2(
            self.0
                .iter()
                .filter(|((i, j), _)| i * wx + j * wy == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        )
    }
}

/// `c_0, .., c_rank` of a bundle as polynomials in `c1, c2` (weights 1, 2).
pub type FormalChern = Vec<Poly2>;

fn graded(total: &Poly2, rank: usize, wx: usize, wy: usize) -> FormalChern {
    (0..=rank).map(|k| total.graded_part(k, wx, wy)).collect()
}

/// Paired-root product: for `i < d/2` the factor
/// `1 + d c1 + i(d-i) c1^2 + (d-2i)^2 c2`, times `1 + (d/2) c1` for even `d`.
pub fn sym_power_closed_form(d: usize) -> FormalChern {
    let mut total = Poly2::one();
    let di = Int::from(d);
    let mut i = 0usize;
    while 2 * i < d {
        let ii = Int::from(i);
        let mut f = Poly2::one();
        f.add_assign(&Poly2::monomial(1, 0, di.clone()));
        f.add_assign(&Poly2::monomial(2, 0, &ii * (&di - &ii)));
        let diff = &di - Int::from(2 * i);
        f.add_assign(&Poly2::monomial(0, 1, &diff * &diff));
        total = total.mul(&f);
        i += 1;
    }
    if d % 2 == 0 && d > 0 {
        let mut f = Poly2::one();
        f.add_assign(&Poly2::monomial(1, 0, Int::from(d / 2)));
        total = total.mul(&f);
    }
    graded(&total, d + 1, 1, 2)
}

/// Rewrites a symmetric polynomial in roots `alpha, beta` in terms of
/// `c1 = alpha + beta`, `c2 = alpha beta` by peeling off leading monomials.
pub fn symmetric_to_chern(p: &Poly2) -> Poly2 {
    let mut rest = p.clone();
    let mut out = Poly2::default();
    let c1 = Poly2(BTreeMap::from([((1, 0), Int::one()), ((0, 1), Int::one())]));
    let c2 = Poly2::monomial(1, 1, Int::one());
    while let Some((&(pa, qb), c)) = rest.0.iter().next_back() {
        // lexicographically largest root monomial alpha^p beta^q, p >= q
        assert!(pa >= qb, "polynomial is not symmetric");
        let c = c.clone();
        let mut m = Poly2::monomial(0, 0, c.clone());
        for _ in 0..(pa - qb) {
            m = m.mul(&c1);
        }
        for _ in 0..qb {
            m = m.mul(&c2);
        }
        let neg = Poly2(m.0.into_iter().map(|(k, v)| (k, -v)).collect());
        rest.add_assign(&neg);
        out.add_assign(&Poly2::monomial(pa - qb, qb, c));
    }
    out
}

/// `prod_{i=0}^d (1 + (d-i) alpha + i beta)` rewritten in `c1, c2`.
pub fn sym_power_root_expansion(d: usize) -> FormalChern {
    let mut total = Poly2::one();
    for i in 0..=d {
        let mut f = Poly2::one();
        f.add_assign(&Poly2::monomial(1, 0, Int::from(d - i)));
        f.add_assign(&Poly2::monomial(0, 1, Int::from(i)));
        total = total.mul(&f);
    }
    graded(&symmetric_to_chern(&total), d + 1, 1, 2)
}

const CACHE_LIMIT: usize = 32;

/// Closed form, memoized for `d <= 32`.
pub fn sym_power(d: usize) -> Arc<FormalChern> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<FormalChern>>>> = OnceLock::new();
    if d > CACHE_LIMIT {
        return Arc::new(sym_power_closed_form(d));
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache lock").get(&d) {
        return v.clone();
    }
    let v = Arc::new(sym_power_closed_form(d));
    cache.lock().expect("cache lock").insert(d, v.clone());
    v
}

/// Whitney product of formal Chern classes.
pub fn whitney(a: &[Poly2], b: &[Poly2]) -> FormalChern {
    let rank = a.len() + b.len() - 2;
    (0..=rank)
        .map(|k| {
            let mut acc = Poly2::default();
            for i in 0..=k {
                if i < a.len() && k - i < b.len() {
                    acc.add_assign(&a[i].mul(&b[k - i]));
                }
            }
            acc
        })
        .collect()
}

/// Formal Chern classes of `Sym^{d_1} R + .. + Sym^{d_k} R`.
pub fn sum_of_sym_powers(degrees: &[usize]) -> FormalChern {
    let mut acc: FormalChern = vec![Poly2::one()];
    for &d in degrees {
        acc = whitney(&acc, &sym_power(d));
    }
    acc
}

/// `int_{Gr(2,e)} p(sigma_1, sigma_{1,1})` via the Pieri table.
pub fn integrate_on_grassmannian(p: &Poly2, e: usize) -> Int {
    p.0.iter()
        .map(|(&(i, j), c)| c * schubert::integral(e, i, j))
        .sum()
}

/// The coefficients `a_j` of `c1^j` in `c_j(Sym^d)` for `j <= d + 1`.
pub fn leading_coefficients(d: usize) -> Vec<Int> {
    sym_power(d).iter().enumerate().map(|(j, p)| p.coeff(j, 0)).collect()
}

/// Whether every coefficient is a nonnegative integer.
pub fn is_nonnegative(p: &Poly2) -> bool {
    p.0.values().all(|c| !c.is_negative())
}
