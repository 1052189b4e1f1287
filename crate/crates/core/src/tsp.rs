//! Traveling-salesman encoding: maps closed tours over N cities onto a
//! symmetric network of (N-1)² p-bits so that annealing minimizes tour
//! length.
//!
//! City 0 is pinned to position 0, which quotients out rotations of the
//! tour; bit `(p-1)(N-1) + (c-1)` being +1 means city `c` sits at position
//! `p`. The objective is `A × (one-hot penalty) + B × (tour length)`,
//! assembled first over 0/1 variables and then shifted to ±1 variables; the
//! constant absorbed by the shift is kept as `energy_offset`, so network
//! energy plus offset equals the objective exactly.

use crate::anneal::{anneal_stream, AnnealResult, AnnealSchedule};
use crate::error::{Error, Result};
use crate::network::{NetworkSpec, StateVector};

/// Symmetric distance matrix over cities.
#[derive(Clone, Debug, PartialEq)]
pub struct TspInstance {
    pub n_cities: usize,
    /// Row-major `n_cities × n_cities`, symmetric, zero diagonal.
    pub distances: Vec<f64>,
}

impl TspInstance {
    pub fn from_points(points: &[(f64, f64)]) -> Result<TspInstance> {
        let n = points.len();
        let mut distances = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                distances[i * n + j] = dx.hypot(dy);
            }
        }
        let inst = TspInstance {
            n_cities: n,
            distances,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_cities;
        if n < 2 {
            return Err(Error::InvalidParameter(
                "a tour needs at least two cities".into(),
            ));
        }
        if self.distances.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "distance matrix has {} entries, expected {}",
                self.distances.len(),
                n * n
            )));
        }
        for i in 0..n {
            if self.distances[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "nonzero self-distance for city {i}"
                )));
            }
            for j in 0..n {
                let d = self.distances[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::NonFinite(format!("distance ({i}, {j})")));
                }
                if (d - self.distances[j * n + i]).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "asymmetric distances for cities {i} and {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distances[i * self.n_cities + j]
    }

    pub fn max_distance(&self) -> f64 {
        self.distances.iter().fold(0.0_f64, |a, &d| a.max(d))
    }

    /// Length of the closed tour 0 → order[0] → … → order[last] → 0.
    /// `order` must be a permutation of the cities 1..n_cities.
    pub fn tour_length(&self, order: &[usize]) -> Result<f64> {
        let n = self.n_cities;
        if order.len() != n - 1 {
            return Err(Error::NotAPermutation);
        }
        let mut seen = vec![false; n];
        for &c in order {
            if c == 0 || c >= n || seen[c] {
                return Err(Error::NotAPermutation);
            }
            seen[c] = true;
        }
        let mut length = self.distance(0, order[0]);
        for pair in order.windows(2) {
            length += self.distance(pair[0], pair[1]);
        }
        length += self.distance(*order.last().unwrap(), 0);
        Ok(length)
    }
}

/// A TSP instance compiled to a p-bit network.
#[derive(Clone, Debug, PartialEq)]
pub struct TspEncoding {
    pub spec: NetworkSpec,
    pub instance: TspInstance,
    /// Constraint penalty weight.
    pub a: f64,
    /// Length weight.
    pub b: f64,
    /// Constant so that `network energy + energy_offset` equals
    /// `a × penalty + b × length` for every configuration.
    pub energy_offset: f64,
}

impl TspEncoding {
    pub fn n_bits(&self) -> usize {
        let m = self.instance.n_cities - 1;
        m * m
    }

    /// Bit index of "city `c` at position `p`" (both 1-based).
    pub fn bit_index(&self, position: usize, city: usize) -> usize {
        let m = self.instance.n_cities - 1;
        (position - 1) * m + (city - 1)
    }
}

/// Builds the network for an instance.
///
/// Defaults when `None`: `b = 1/max_distance` normalizes lengths to at most
/// roughly `n_cities`, and `a = 2 × n_cities × b × max_distance` makes the
/// cheapest constraint violation cost more than any possible length saving.
pub fn tsp_encode(inst: &TspInstance, a: Option<f64>, b: Option<f64>) -> Result<TspEncoding> {
    inst.validate()?;
    let d_max = inst.max_distance();
    if d_max <= 0.0 {
        return Err(Error::InvalidParameter(
            "all distances are zero; nothing to optimize".into(),
        ));
    }
    let b = b.unwrap_or(1.0 / d_max);
    let a = a.unwrap_or(2.0 * inst.n_cities as f64 * b * d_max);
    if !(a > 0.0) || !a.is_finite() || !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidParameter(
            "penalty and length weights must be positive and finite".into(),
        ));
    }
    let n = inst.n_cities;
    let m = n - 1; // positions 1..=m, cities 1..=m
    let nb = m * m;
    let idx = |p: usize, c: usize| (p - 1) * m + (c - 1);

    // Objective over 0/1 variables: Σ_{i<j} Q_ij x_i x_j + Σ_i q_i x_i + 2A(n-1).
    let mut q_lin = vec![0.0_f64; nb];
    let mut q_quad = vec![0.0_f64; nb * nb]; // upper triangle
    let mut add_quad = |i: usize, j: usize, v: f64| {
        let (lo, hi) = (i.min(j), i.max(j));
        q_quad[lo * nb + hi] += v;
    };
    // One-hot penalties: (Σ x - 1)² = -Σ x + 2 Σ_{pairs} x x' + 1 per group.
    for p in 1..=m {
        for c in 1..=m {
            q_lin[idx(p, c)] -= a;
            for c2 in (c + 1)..=m {
                add_quad(idx(p, c), idx(p, c2), 2.0 * a);
            }
        }
    }
    for c in 1..=m {
        for p in 1..=m {
            q_lin[idx(p, c)] -= a;
            for p2 in (p + 1)..=m {
                add_quad(idx(p, c), idx(p2, c), 2.0 * a);
            }
        }
    }
    // Length: legs to and from city 0, then consecutive-position legs.
    for c in 1..=m {
        q_lin[idx(1, c)] += b * inst.distance(0, c);
        q_lin[idx(m, c)] += b * inst.distance(c, 0);
    }
    for p in 1..m {
        for c in 1..=m {
            for c2 in 1..=m {
                if c != c2 {
                    add_quad(idx(p, c), idx(p + 1, c2), b * inst.distance(c, c2));
                }
            }
        }
    }

    // Shift x = (m+1)/2 to ±1 variables: couplings -Q/4, biases fold in the
    // halved linear term plus each bit's quadratic row sum, and the dropped
    // constant moves into the reported offset.
    let mut dense_w = vec![0.0_f64; nb * nb];
    let mut biases = vec![0.0_f64; nb];
    let mut offset = 2.0 * a * m as f64;
    for i in 0..nb {
        biases[i] -= 0.5 * q_lin[i];
        offset += 0.5 * q_lin[i];
        for j in (i + 1)..nb {
            let qv = q_quad[i * nb + j];
            if qv != 0.0 {
                dense_w[i * nb + j] = -qv / 4.0;
                biases[i] -= qv / 4.0;
                biases[j] -= qv / 4.0;
                offset += qv / 4.0;
            }
        }
    }
    let spec = NetworkSpec::from_dense_symmetric(nb, &dense_w, biases, Vec::new())?;
    Ok(TspEncoding {
        spec,
        instance: inst.clone(),
        a,
        b,
        energy_offset: offset,
    })
}

/// What a bit configuration means as a tour.
#[derive(Clone, Debug, PartialEq)]
pub enum DecodedTour {
    /// One-hot in both directions: a real tour and its length.
    Valid { order: Vec<usize>, length: f64 },
    /// Constraint violations: positions and cities whose bit group does not
    /// have exactly one +1.
    Invalid {
        position_violations: usize,
        city_violations: usize,
    },
}

/// Reads a network state back as a tour.
pub fn decode_tour(state: &StateVector, enc: &TspEncoding) -> Result<DecodedTour> {
    let m = enc.instance.n_cities - 1;
    if state.len() != m * m {
        return Err(Error::LengthMismatch {
            expected: m * m,
            got: state.len(),
        });
    }
    let mut position_violations = 0usize;
    let mut city_violations = 0usize;
    let mut order = vec![0usize; m];
    for p in 1..=m {
        let mut count = 0;
        for c in 1..=m {
            if state.m[enc.bit_index(p, c)] == 1 {
                count += 1;
                order[p - 1] = c;
            }
        }
        if count != 1 {
            position_violations += 1;
        }
    }
    for c in 1..=m {
        let count = (1..=m)
            .filter(|&p| state.m[enc.bit_index(p, c)] == 1)
            .count();
        if count != 1 {
            city_violations += 1;
        }
    }
    if position_violations == 0 && city_violations == 0 {
        let length = enc.instance.tour_length(&order)?;
        Ok(DecodedTour::Valid { order, length })
    } else {
        Ok(DecodedTour::Invalid {
            position_violations,
            city_violations,
        })
    }
}

/// Exhaustive optimum: best visiting order, its length, and how many of the
/// (n_cities - 1)! orders achieve it (a unique tour shows up as 2, the order
/// and its reversal). Limited to 10 cities.
pub fn brute_force_optimum(inst: &TspInstance) -> Result<(Vec<usize>, f64, usize)> {
    inst.validate()?;
    if inst.n_cities > 10 {
        return Err(Error::InvalidParameter(
            "brute force is limited to 10 cities".into(),
        ));
    }
    let mut order: Vec<usize> = (1..inst.n_cities).collect();
    let mut best_order = order.clone();
    let mut best_length = inst.tour_length(&order)?;
    let mut best_count = 0usize;
    // Heap's algorithm over the cities after city 0.
    let k = order.len();
    let mut c = vec![0usize; k];
    let consider = |order: &[usize],
                        best_order: &mut Vec<usize>,
                        best_length: &mut f64,
                        best_count: &mut usize|
     -> Result<()> {
        let length = inst.tour_length(order)?;
        if length < *best_length - 1e-9 {
            *best_length = length;
            *best_order = order.to_vec();
            *best_count = 1;
        } else if (length - *best_length).abs() <= 1e-9 {
            *best_count += 1;
        }
        Ok(())
    };
    consider(&order, &mut best_order, &mut best_length, &mut best_count)?;
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            consider(&order, &mut best_order, &mut best_length, &mut best_count)?;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok((best_order, best_length, best_count))
}

/// Encodes, anneals on one RNG stream, and decodes the best state found.
pub fn solve_tsp(
    enc: &TspEncoding,
    schedule: &AnnealSchedule,
    seed: u64,
    stream: u64,
) -> Result<(AnnealResult, DecodedTour)> {
    let result = anneal_stream(&enc.spec, schedule, seed, stream)?;
    let tour = decode_tour(&result.best_state, enc)?;
    Ok((result, tour))
}
