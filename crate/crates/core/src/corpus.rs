//! Built-in fans with named divisor generators, and a seeded generator of
//! hypothesis-satisfying random instances (iterated blow-ups of projective
//! spaces cut by their anticanonical class).

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Int;
use crate::classes::{CurveClass, DivisorClass};
use crate::error::FanError;
use crate::fan::{subsets_of_size, Fan, LatticeVector, ToricVariety};

/// A named fan with the divisor names accepted by [`CorpusEntry::parse_divisor`].
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub fan: Fan,
    pub generators: Vec<(String, DivisorClass)>,
}

impl CorpusEntry {
    /// Parses `aH+bE`-style expressions over the named generators, a bare
    /// integer `k` (meaning `k` times the first generator), or a raw
    /// coefficient vector `[c0,c1,...]`.
    pub fn parse_divisor(&self, text: &str) -> Result<DivisorClass, FanError> {
        parse_divisor(text, self.fan.n_rays(), &self.generators)
    }
}

/// Divisor mini-language shared by the corpus and user-supplied fans.
pub fn parse_divisor(
    text: &str,
    n_rays: usize,
    generators: &[(String, DivisorClass)],
) -> Result<DivisorClass, FanError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(FanError::Parse("empty divisor expression".into()));
    }
    if t.starts_with('[') || t.contains(',') {
        let inner = t.trim_start_matches('[').trim_end_matches(']');
        let coeffs = inner
            .split(',')
            .map(|s| {
                s.parse::<Int>()
                    .map_err(|_| FanError::Parse(format!("bad coefficient `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != n_rays {
            return Err(FanError::LengthMismatch {
                expected: n_rays,
                found: coeffs.len(),
            });
        }
        return Ok(DivisorClass::new(coeffs));
    }
    if let Ok(k) = t.parse::<Int>() {
        let (_, g) = generators
            .first()
            .ok_or_else(|| FanError::Parse("no named generators for a bare multiple".into()))?;
        return Ok(g.scale(&k));
    }
    let mut acc = DivisorClass::zero(n_rays);
    let bytes = t.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = Int::from(1);
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = Int::from(-1);
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff = if start == i {
            Int::from(1)
        } else {
            t[start..i].parse::<Int>().expect("digits")
        };
        let name_start = i;
        if i >= bytes.len() || !bytes[i].is_ascii_alphabetic() {
            return Err(FanError::Parse(format!("expected a generator name in `{t}`")));
        }
        while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
            i += 1;
        }
        let name = &t[name_start..i];
        let (_, g) = generators
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| FanError::Parse(format!("unknown generator `{name}`")))?;
        acc = acc.add(&g.scale(&(sign * coeff)));
    }
    Ok(acc)
}

/// Fan of `P^n`: rays `e_1..e_n` then `e_0 = -(e_1+..+e_n)`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut v = vec![Int::zero(); n];
        v[i] = Int::from(1);
        rays.push(LatticeVector(v));
    }
    rays.push(LatticeVector(vec![Int::from(-1); n]));
    let all: Vec<usize> = (0..=n).collect();
    Fan::new(n, rays, subsets_of_size(&all, n)).expect("projective space fan")
}

/// Product of two fans, rays of the first factor first.
pub fn product(a: &Fan, b: &Fan) -> Fan {
    let dim = a.dim() + b.dim();
    let mut rays = Vec::new();
    for r in a.rays() {
        let mut v = r.coords().to_vec();
        v.extend(std::iter::repeat_n(Int::zero(), b.dim()));
        rays.push(LatticeVector(v));
    }
    for r in b.rays() {
        let mut v = vec![Int::zero(); a.dim()];
        v.extend(r.coords().iter().cloned());
        rays.push(LatticeVector(v));
    }
    let mut cones = Vec::new();
    for ca in a.max_cones() {
        for cb in b.max_cones() {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|&i| i + a.n_rays()));
            cones.push(c);
        }
    }
    Fan::new(dim, rays, cones).expect("product fan")
}

pub fn p1_times_p1() -> Fan {
    product(&projective_space(1), &projective_space(1))
}

/// Star subdivision at the sum of the generators of `cone`: the blow-up
/// along the orbit closure of that cone. The new ray is appended last.
pub fn blowup(fan: &Fan, cone: &[usize]) -> Result<Fan, FanError> {
    let mut cone = cone.to_vec();
    cone.sort_unstable();
    if cone.len() < 2 || !fan.is_cone(&cone) {
        return Err(FanError::Parse("blow-up center must be a cone of dimension at least 2".into()));
    }
    let mut new_ray = vec![Int::zero(); fan.dim()];
    for &r in &cone {
        for (x, y) in new_ray.iter_mut().zip(fan.ray(r).coords()) {
            *x += y;
        }
    }
    let idx = fan.n_rays();
    let mut rays = fan.rays().to_vec();
    rays.push(LatticeVector(new_ray));
    let mut cones = Vec::new();
    for c in fan.max_cones() {
        if cone.iter().all(|r| c.contains(r)) {
            for r in &cone {
                let mut nc: Vec<usize> = c.iter().copied().filter(|x| x != r).collect();
                nc.push(idx);
                cones.push(nc);
            }
        } else {
            cones.push(c.clone());
        }
    }
    Fan::new(fan.dim(), rays, cones)
}

/// `P^4` blown up along the line `V(cone(e1,e2,e3))`.
/// Rays: `e1,e2,e3,e4,e0,f` with `f = e1+e2+e3`.
pub fn blowup_p4_line() -> Fan {
    blowup(&projective_space(4), &[0, 1, 2]).expect("center is a cone")
}

/// `P^6` blown up along the `P^3 = V(cone(e1,e2,e3))`.
/// Rays: `e1..e6,e0,f`.
pub fn blowup_p6_p3() -> Fan {
    blowup(&projective_space(6), &[0, 1, 2]).expect("center is a cone")
}

/// The blow-up of `P^4` along a line, blown up again at the torus-fixed
/// point `V(cone(f,e1,e2,e4))` of the exceptional divisor.
pub fn iterated_blowup_p4() -> Fan {
    blowup(&blowup_p4_line(), &[0, 1, 3, 5]).expect("center is a cone")
}

/// The class `e` of a line in a fiber of the exceptional divisor of
/// [`blowup_p4_line`].
pub fn blowup_p4_line_class_e() -> CurveClass {
    CurveClass::from_i64(&[1, 1, 1, 0, 0, -1])
}

/// The class `h - e` of the fibers of the projection from the line.
pub fn blowup_p4_line_class_h_minus_e() -> CurveClass {
    CurveClass::from_i64(&[0, 0, 0, 1, 1, 1])
}

fn named(n_rays: usize, names: &[(&str, usize)]) -> Vec<(String, DivisorClass)> {
    names
        .iter()
        .map(|(n, r)| (n.to_string(), DivisorClass::ray(n_rays, *r)))
        .collect()
}

pub fn entries() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 2..=6usize {
        let fan = projective_space(n);
        let generators = named(n + 1, &[("H", n)]);
        out.push(CorpusEntry {
            name: ["P2", "P3", "P4", "P5", "P6"][n - 2],
            description: "projective space; rays e1..en, e0 = -(e1+..+en); H = D(e0)",
            fan,
            generators,
        });
    }
    let fan = product(&projective_space(1), &projective_space(2));
    out.push(CorpusEntry {
        name: "P1xP2",
        description: "product of a line and a plane; H1 = D(e1) pulled back from P1, H2 = D(e1') from P2",
        generators: named(fan.n_rays(), &[("H1", 0), ("H2", 2)]),
        fan,
    });
    let fan = blowup_p4_line();
    out.push(CorpusEntry {
        name: "BlP4_line",
        description: "P4 blown up along the line V(cone(e1,e2,e3)); H = D(e0), E = D(f)",
        generators: named(fan.n_rays(), &[("H", 4), ("E", 5)]),
        fan,
    });
    let fan = blowup_p6_p3();
    out.push(CorpusEntry {
        name: "BlP6_P3",
        description: "P6 blown up along the P3 = V(cone(e1,e2,e3)); H = D(e0), E = D(f)",
        generators: named(fan.n_rays(), &[("H", 6), ("E", 7)]),
        fan,
    });
    let fan = iterated_blowup_p4();
    out.push(CorpusEntry {
        name: "Bl2P4",
        description: "BlP4_line blown up at the fixed point V(cone(e1,e2,e4,f)); H = D(e0), E1 = D(f), E2 = D(g)",
        generators: named(fan.n_rays(), &[("H", 4), ("E1", 5), ("E2", 6)]),
        fan,
    });
    out
}

pub fn lookup(name: &str) -> Option<CorpusEntry> {
    entries().into_iter().find(|e| e.name == name)
}

/// Named complete intersections on corpus fans: the anticanonical
/// hypersurface on every entry, plus the classical and worked examples.
/// Not all of them satisfy the theorem's hypotheses.
pub fn configurations() -> Vec<Instance> {
    let mut out = Vec::new();
    for entry in entries() {
        out.push(Instance {
            name: format!("{}:-K", entry.name),
            hypersurfaces: vec![DivisorClass::anticanonical(entry.fan.n_rays())],
            fan: entry.fan,
        });
    }
    let extra: [(&str, &[&str]); 5] = [
        ("P4", &["5H"]),
        ("P5", &["3H", "3H"]),
        ("P6", &["2H", "2H", "3H"]),
        ("BlP6_P3", &["8H-2E"]),
        ("Bl2P4", &["4H-E1-E2"]),
    ];
    for (name, hs) in extra {
        let entry = lookup(name).expect("corpus entry");
        out.push(Instance {
            name: format!("{name}:{}", hs.join(",")),
            hypersurfaces: hs.iter().map(|h| entry.parse_divisor(h).expect("corpus divisor")).collect(),
            fan: entry.fan,
        });
    }
    out
}

/// A test instance: a fan with hypersurface classes.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub fan: Fan,
    pub hypersurfaces: Vec<DivisorClass>,
}

/// Deterministic random instance number `index` for `seed`: `P^n`
/// (`4 <= n <= 6`) blown up at up to two random torus-invariant centers,
/// kept only when `-K` is ample, cut by `-K` (or, on `P^n` with `n >= 5`,
/// sometimes by two hypersurfaces summing to `-K`).
pub fn random_instance(seed: u64, index: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    loop {
        let n = rng.gen_range(4..=6usize);
        let mut fan = projective_space(n);
        let mut label = format!("P{n}");
        let blowups = rng.gen_range(0..=2usize);
        for _ in 0..blowups {
            let c = rng.gen_range(0..fan.max_cones().len());
            let cone = fan.max_cones()[c].clone();
            let size = rng.gen_range(2..=n);
            let mut picked = cone.clone();
            // partial Fisher-Yates to pick `size` rays of the cone
            for i in 0..size {
                let j = rng.gen_range(i..picked.len());
                picked.swap(i, j);
            }
            picked.truncate(size);
            picked.sort_unstable();
            fan = blowup(&fan, &picked).expect("center is a face of a maximal cone");
            label.push_str(&format!("_bl{picked:?}"));
        }
        let Ok(variety) = ToricVariety::new(fan.clone()) else {
            continue;
        };
        let k = variety.anticanonical();
        if !variety.is_projective() || !variety.is_ample(&k) {
            continue;
        }
        let hypersurfaces = if blowups == 0 && n >= 5 && rng.gen_bool(0.5) {
            let a = rng.gen_range(1..=n);
            let h = DivisorClass::ray(n + 1, n);
            vec![h.scale(&Int::from(a)), h.scale(&Int::from(n + 1 - a))]
        } else {
            vec![k]
        };
        return Instance {
            name: format!("random[{seed}:{index}] {label}"),
            fan,
            hypersurfaces,
        };
    }
}
