use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::arith::{dot, Rat};
use crate::chow::{top_coords, ChowElement, GradedRing, RingId};
use crate::classes::DivisorClass;
use crate::error::{ChowError, FanError};
use crate::fan::{validate_fan, Fan};
use crate::linalg::{rref, Rref};

/// Chow ring of a smooth complete toric variety.
///
/// Degree `k` is spanned by the square-free monomials of the `k`-cones; the
/// relations are `x^tau * div(chi^m)` for `(k-1)`-cones `tau` and `m`
/// vanishing on `tau`, which only involve cone monomials. The basis of each
/// degree is the set of non-pivot monomials after row reduction.
#[derive(Clone, Debug)]
pub struct ToricChowRing {
    id: RingId,
    fan: Fan,
    cones: Vec<Vec<Vec<usize>>>,
    cone_index: Vec<HashMap<Vec<usize>, usize>>,
    reductions: Vec<Rref>,
    basis: Vec<Vec<usize>>,
    // [k][spanning cone] -> coordinates over the degree-k basis
    to_basis: Vec<Vec<Vec<Rat>>>,
    // [k][ray][basis index] -> product with D_ray in degree k+1
    mul_ray: Vec<Vec<Vec<Vec<Rat>>>>,
    // (k1, i, k2, j) -> product of basis elements
    products: HashMap<(usize, usize, usize, usize), Vec<Rat>>,
    point_coord: Rat,
}

impl ToricChowRing {
    pub fn new(fan: &Fan) -> Result<ToricChowRing, ChowError> {
        let report = validate_fan(fan);
        if let Some(&c) = report.singular_cones.first() {
            return Err(FanError::NotSmooth(c).into());
        }
        if !report.complete {
            return Err(FanError::NotComplete { count: 1 }.into());
        }
        let n = fan.dim();
        let cones: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| fan.cones_of_dim(k)).collect();
        let cone_index: Vec<HashMap<Vec<usize>, usize>> = cones
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        let duals: Vec<Vec<Vec<_>>> = (0..fan.max_cones().len())
            .map(|i| fan.dual_basis(i).expect("smooth cone"))
            .collect();

        let mut reductions = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let width = cones[k].len();
            let mut rows = Vec::new();
            if k > 0 {
                for tau in &cones[k - 1] {
                    let s = fan.max_cone_containing(tau).expect("face of a maximal cone");
                    let sigma = &fan.max_cones()[s];
                    for (pos, rho0) in sigma.iter().enumerate() {
                        if tau.contains(rho0) {
                            continue;
                        }
                        let m = &duals[s][pos];
                        let mut row = vec![Rat::zero(); width];
                        for rho in 0..fan.n_rays() {
                            if tau.contains(&rho) {
                                continue;
                            }
                            let mut c = tau.clone();
                            c.push(rho);
                            c.sort_unstable();
                            if let Some(&idx) = cone_index[k].get(&c) {
                                row[idx] += Rat::from_integer(dot(m, fan.ray(rho).coords()));
                            }
                        }
                        rows.push(row);
                    }
                }
            }
            reductions.push(rref(rows, width));
        }

        let mut basis = Vec::with_capacity(n + 1);
        let mut to_basis = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let red = &reductions[k];
            let width = cones[k].len();
            let b: Vec<usize> = (0..width).filter(|c| !red.pivots.contains(c)).collect();
            let tb: Vec<Vec<Rat>> = (0..width)
                .map(|j| {
                    let mut v = vec![Rat::zero(); width];
                    v[j] = Rat::one();
                    red.reduce(&mut v);
                    b.iter().map(|&c| v[c].clone()).collect()
                })
                .collect();
            basis.push(b);
            to_basis.push(tb);
        }

        let mut ring = ToricChowRing {
            id: RingId::fresh(),
            fan: fan.clone(),
            cones,
            cone_index,
            reductions,
            basis,
            to_basis,
            mul_ray: Vec::new(),
            products: HashMap::new(),
            point_coord: Rat::one(),
        };
        if ring.basis[n].len() != 1 {
            return Err(FanError::NotComplete { count: ring.basis[n].len() }.into());
        }
        // any maximal cone monomial is the point class
        let first = ring.cone_index[n][&fan.max_cones()[0]];
        ring.point_coord = ring.to_basis[n][first][0].clone();

        let mut mul_ray = Vec::with_capacity(n);
        for k in 0..n {
            let mut per_ray = Vec::with_capacity(fan.n_rays());
            for rho in 0..fan.n_rays() {
                let rows: Vec<Vec<Rat>> = ring.basis[k]
                    .iter()
                    .map(|&sp| ring.monomial_times_ray(k, sp, rho, &duals))
                    .collect();
                per_ray.push(rows);
            }
            mul_ray.push(per_ray);
        }
        ring.mul_ray = mul_ray;

        let mut products = HashMap::new();
        for k1 in 0..=n {
            for k2 in 0..=(n - k1) {
                for i in 0..ring.basis[k1].len() {
                    let x = ring.basis_element(k1, i);
                    for j in 0..ring.basis[k2].len() {
                        let tau = &ring.cones[k2][ring.basis[k2][j]];
                        let mut y = x.clone();
                        for &rho in tau {
                            y = ring.times_ray(&y, rho);
                        }
                        products.insert((k1, i, k2, j), y.comps[k1 + k2].clone());
                    }
                }
            }
        }
        ring.products = products;
        Ok(ring)
    }

    /// `x^tau * D_rho` for the spanning monomial `tau` of degree `k`, over the
    /// degree-`(k+1)` basis.
    fn monomial_times_ray(&self, k: usize, sp: usize, rho: usize, duals: &[Vec<Vec<crate::arith::Int>>]) -> Vec<Rat> {
        let tau = &self.cones[k][sp];
        let width = self.basis[k + 1].len();
        if !tau.contains(&rho) {
            return self.extend_cone(k, tau, rho).unwrap_or_else(|| vec![Rat::zero(); width]);
        }
        // D_rho = -sum_{rho'' not in sigma} <m, u_rho''> D_rho'' modulo linear
        // equivalence, where m is dual to rho on a maximal cone sigma over tau
        let s = self.fan.max_cone_containing(tau).expect("face of a maximal cone");
        let sigma = &self.fan.max_cones()[s];
        let pos = sigma.iter().position(|&r| r == rho).expect("ray in cone");
        let m = &duals[s][pos];
        let mut out = vec![Rat::zero(); width];
        for other in 0..self.fan.n_rays() {
            if sigma.contains(&other) {
                continue;
            }
            let c = dot(m, self.fan.ray(other).coords());
            if c.is_zero() {
                continue;
            }
            if let Some(v) = self.extend_cone(k, tau, other) {
                let c = Rat::from_integer(c);
                for (o, x) in out.iter_mut().zip(v) {
                    *o -= &c * x;
                }
            }
        }
        out
    }

    fn extend_cone(&self, k: usize, tau: &[usize], rho: usize) -> Option<Vec<Rat>> {
        let mut c = tau.to_vec();
        c.push(rho);
        c.sort_unstable();
        self.cone_index[k + 1]
            .get(&c)
            .map(|&idx| self.to_basis[k + 1][idx].clone())
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    /// The cone monomials forming the degree-`k` basis.
    pub fn basis_cones(&self, k: usize) -> Vec<Vec<usize>> {
        self.basis[k].iter().map(|&i| self.cones[k][i].clone()).collect()
    }

    /// Class of the orbit closure of a cone (zero if the rays span no cone).
    pub fn cone_class(&self, rays: &[usize]) -> ChowElement {
        let mut c = rays.to_vec();
        c.sort_unstable();
        c.dedup();
        let k = c.len();
        if k > self.dim() || c.len() != rays.len() {
            return self.zero();
        }
        match self.cone_index[k].get(&c) {
            Some(&idx) => self.homogeneous(k, self.to_basis[k][idx].clone()),
            None => self.zero(),
        }
    }

    pub fn ray_class(&self, rho: usize) -> ChowElement {
        self.cone_class(&[rho])
    }

    pub fn divisor(&self, d: &DivisorClass) -> Result<ChowElement, ChowError> {
        if d.len() != self.fan.n_rays() {
            return Err(FanError::LengthMismatch {
                expected: self.fan.n_rays(),
                found: d.len(),
            }
            .into());
        }
        let mut acc = vec![Rat::zero(); self.rank_in_degree(1)];
        for (rho, c) in d.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = Rat::from_integer(c.clone());
            let idx = self.cone_index[1][&vec![rho]];
            for (a, x) in acc.iter_mut().zip(&self.to_basis[1][idx]) {
                *a += &c * x;
            }
        }
        Ok(self.homogeneous(1, acc))
    }

    /// Multiplication by `D_rho`.
    pub fn times_ray(&self, x: &ChowElement, rho: usize) -> ChowElement {
        let n = self.dim();
        let mut out = self.zero();
        for k in 0..n {
            for (i, c) in x.comps[k].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (o, v) in out.comps[k + 1].iter_mut().zip(&self.mul_ray[k][rho][i]) {
                    *o += c * v;
                }
            }
        }
        out
    }

    /// Coordinates of the product of basis elements `(k1, i)` and `(k2, j)`.
    pub(crate) fn basis_product(&self, k1: usize, i: usize, k2: usize, j: usize) -> Option<&[Rat]> {
        self.products.get(&(k1, i, k2, j)).map(Vec::as_slice)
    }

    /// Number of spanning monomials and relations used in degree `k`.
    pub fn presentation_size(&self, k: usize) -> (usize, usize) {
        (self.cones[k].len(), self.reductions[k].rank())
    }
}

impl GradedRing for ToricChowRing {
    fn id(&self) -> RingId {
        self.id
    }

    fn top_degree(&self) -> usize {
        self.fan.dim()
    }

    fn rank_in_degree(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, Vec::len)
    }

    fn basis_names(&self, k: usize) -> Vec<String> {
        self.basis_cones(k)
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "1".to_string()
                } else {
                    c.iter().map(|r| format!("D{r}")).collect::<Vec<_>>().join("*")
                }
            })
            .collect()
    }

    fn mul(&self, a: &ChowElement, b: &ChowElement) -> Result<ChowElement, ChowError> {
        self.check(a)?;
        self.check(b)?;
        let n = self.dim();
        let mut out = self.zero();
        for k1 in 0..=n {
            for (i, x) in a.comps[k1].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for k2 in 0..=(n - k1) {
                    for (j, y) in b.comps[k2].iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let xy = x * y;
                        let p = &self.products[&(k1, i, k2, j)];
                        for (o, v) in out.comps[k1 + k2].iter_mut().zip(p) {
                            if !v.is_zero() {
                                *o += &xy * v;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn degree(&self, x: &ChowElement) -> Result<Rat, ChowError> {
        let c = top_coords(self, x)?;
        Ok(&c[0] / &self.point_coord)
    }
}
