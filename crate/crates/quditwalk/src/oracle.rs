//! Direct evolution of coined walks, without circuits.
//!
//! The joint state lives on a dense box of radius `steps` (plus any initial
//! spread) around the origin; the walker cannot leave that light cone. Each
//! step is a gather: the amplitude arriving at `(p, c')` is computed from
//! the single site it came from, so every output amplitude is written once
//! and the parallel path gives the same bits as the sequential one.
//!
//! Coin bases:
//! - line: `(↑, ↓)`, `↑` steps to `x − 1` (mirrored orientation swaps this)
//! - lazy: `(↑, ·, ↓)` stepping `−1, 0, +1`
//! - 2D: `(↑, ↓, ←, →)` with the flip-flop shift
//! - D-dim: `c` moves along axis `c / 2`, towards `+` when `c` is odd, then flips to `c ^ 1`

use num_complex::Complex64;

use crate::distribution::Distribution;
use crate::error::{domain, Result};
use crate::gates::{ExecPolicy, TOL};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Coin state 0 steps towards `−x`.
    Standard,
    /// Coin state 0 steps towards `+x`.
    Mirrored,
}

impl Orientation {
    /// Orientation whose coin-0 branch moves by `step` (±1).
    pub fn from_coin0_step(step: i64) -> Self {
        if step > 0 {
            Orientation::Mirrored
        } else {
            Orientation::Standard
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WalkVariant {
    Line,
    Lazy,
    Lattice2D,
    LatticeDdim(usize),
}

impl WalkVariant {
    pub fn name(&self) -> String {
        match self {
            WalkVariant::Line => "line".into(),
            WalkVariant::Lazy => "lazy".into(),
            WalkVariant::Lattice2D => "lattice2d".into(),
            WalkVariant::LatticeDdim(d) => format!("lattice{d}d"),
        }
    }

    pub fn dims(&self) -> usize {
        match self {
            WalkVariant::Line | WalkVariant::Lazy => 1,
            WalkVariant::Lattice2D => 2,
            WalkVariant::LatticeDdim(d) => *d,
        }
    }

    pub fn coin_dim(&self) -> usize {
        match self {
            WalkVariant::Line => 2,
            WalkVariant::Lazy => 3,
            WalkVariant::Lattice2D => 4,
            WalkVariant::LatticeDdim(d) => 2 * d,
        }
    }

    pub fn coin_basis(&self) -> String {
        match self {
            WalkVariant::Line => "up,down (up: x-1)".into(),
            WalkVariant::Lazy => "up,stay,down (up: x-1)".into(),
            WalkVariant::Lattice2D => "up,down,left,right (flip-flop)".into(),
            WalkVariant::LatticeDdim(_) => "c: axis c/2, +1 if c odd, then c^1".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpec {
    pub variant: WalkVariant,
    pub coin: Matrix,
    pub steps: usize,
    pub initial_coin: Vec<Complex64>,
    pub initial_position: Vec<i64>,
    /// Uniform superposition over `[−L, L]^D` instead of a single site.
    pub uniform_extent: Option<i64>,
    pub orientation: Orientation,
}

impl WalkSpec {
    pub fn new(variant: WalkVariant, coin: Matrix, steps: usize) -> Self {
        let k = variant.coin_dim();
        let dims = variant.dims();
        let mut c0 = vec![Complex64::new(0.0, 0.0); k];
        if let Some(first) = c0.first_mut() {
            *first = Complex64::new(1.0, 0.0);
        }
        Self {
            variant,
            coin,
            steps,
            initial_coin: c0,
            initial_position: vec![0; dims],
            uniform_extent: None,
            orientation: Orientation::Standard,
        }
    }

    pub fn with_initial_coin(mut self, c: Vec<Complex64>) -> Self {
        self.initial_coin = c;
        self
    }

    /// Equal-weight coin state.
    pub fn with_uniform_coin(mut self) -> Self {
        let k = self.variant.coin_dim();
        let a = 1.0 / (k as f64).sqrt();
        self.initial_coin = vec![Complex64::new(a, 0.0); k];
        self
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = o;
        self
    }

    pub fn with_uniform_extent(mut self, l: i64) -> Self {
        self.uniform_extent = Some(l);
        self
    }

    fn validate(&self) -> Result<()> {
        let k = self.variant.coin_dim();
        if let WalkVariant::LatticeDdim(0) = self.variant {
            return domain("lattice dimension must be at least 1");
        }
        if self.coin.dim() != k {
            return domain(format!("{} walk needs a {k}x{k} coin", self.variant.name()));
        }
        if !self.coin.is_unitary(TOL) {
            return domain("coin is not unitary");
        }
        if self.initial_coin.len() != k {
            return domain(format!("initial coin has {} entries, need {k}", self.initial_coin.len()));
        }
        let n: f64 = self.initial_coin.iter().map(|a| a.norm_sqr()).sum();
        if (n - 1.0).abs() > TOL {
            return domain("initial coin state is not normalized");
        }
        if self.initial_position.len() != self.variant.dims() {
            return domain("initial position has the wrong dimension");
        }
        if matches!(self.uniform_extent, Some(l) if l < 0) {
            return domain("uniform extent must be non-negative");
        }
        Ok(())
    }

    /// Per coin state: displacement and the coin state after the move.
    fn moves(&self) -> Vec<(Vec<i64>, usize)> {
        let flip = match self.orientation {
            Orientation::Standard => 1,
            Orientation::Mirrored => -1,
        };
        match self.variant {
            WalkVariant::Line => vec![(vec![-flip], 0), (vec![flip], 1)],
            WalkVariant::Lazy => vec![(vec![-flip], 0), (vec![0], 1), (vec![flip], 2)],
            WalkVariant::Lattice2D => vec![
                (vec![0, -1], 1),
                (vec![0, 1], 0),
                (vec![-1, 0], 3),
                (vec![1, 0], 2),
            ],
            WalkVariant::LatticeDdim(d) => (0..2 * d)
                .map(|c| {
                    let mut v = vec![0; d];
                    v[c / 2] = if c % 2 == 1 { 1 } else { -1 };
                    (v, c ^ 1)
                })
                .collect(),
        }
    }
}

/// Joint coin ⊗ position state on a dense box.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub dims: usize,
    pub coin_dim: usize,
    /// Box is `[−radius, radius]` on every axis.
    pub radius: i64,
    /// `amps[site * coin_dim + c]`, sites in row-major order, axis 0 slowest.
    pub amps: Vec<Complex64>,
}

impl JointState {
    fn side(&self) -> usize {
        (2 * self.radius + 1) as usize
    }

    pub fn sites(&self) -> usize {
        self.side().pow(self.dims as u32)
    }

    pub fn site_index(&self, p: &[i64]) -> Option<usize> {
        let side = self.side() as i64;
        let mut idx = 0i64;
        for &c in p {
            let o = c + self.radius;
            if o < 0 || o >= side {
                return None;
            }
            idx = idx * side + o;
        }
        Some(idx as usize)
    }

    pub fn site_point(&self, mut idx: usize) -> Vec<i64> {
        let side = self.side();
        let mut p = vec![0; self.dims];
        for a in (0..self.dims).rev() {
            p[a] = (idx % side) as i64 - self.radius;
            idx /= side;
        }
        p
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Same state on a box `extra` sites wider on every side.
    pub fn padded(&self, extra: i64) -> JointState {
        let mut out = JointState {
            dims: self.dims,
            coin_dim: self.coin_dim,
            radius: self.radius + extra,
            amps: Vec::new(),
        };
        out.amps = vec![Complex64::new(0.0, 0.0); out.sites() * self.coin_dim];
        let k = self.coin_dim;
        for s in 0..self.sites() {
            let t = out.site_index(&self.site_point(s)).expect("inner box fits");
            out.amps[t * k..(t + 1) * k].copy_from_slice(&self.amps[s * k..(s + 1) * k]);
        }
        out
    }

    /// Position marginal; every site of the box appears, zeros included.
    pub fn distribution(&self) -> Distribution {
        let mut d = Distribution::new(self.dims);
        for s in 0..self.sites() {
            let p: f64 = self.amps[s * self.coin_dim..(s + 1) * self.coin_dim]
                .iter()
                .map(|a| a.norm_sqr())
                .sum();
            d.entries.insert(self.site_point(s), p);
        }
        d
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub distribution: Distribution,
    pub state: JointState,
}

fn initial_state(spec: &WalkSpec) -> JointState {
    let dims = spec.variant.dims();
    let k = spec.variant.coin_dim();
    let spread = spec.uniform_extent.unwrap_or(0);
    let reach = spec.initial_position.iter().map(|c| c.abs()).max().unwrap_or(0);
    let radius = reach + spread + spec.steps as i64;
    let mut st = JointState {
        dims,
        coin_dim: k,
        radius,
        amps: Vec::new(),
    };
    st.amps = vec![Complex64::new(0.0, 0.0); st.sites() * k];
    let width = (2 * spread + 1) as usize;
    let count = width.pow(dims as u32);
    let scale = 1.0 / (count as f64).sqrt();
    for i in 0..count {
        let mut off = vec![0i64; dims];
        let mut r = i;
        for a in (0..dims).rev() {
            off[a] = (r % width) as i64 - spread;
            r /= width;
        }
        let p: Vec<i64> = spec.initial_position.iter().zip(&off).map(|(a, b)| a + b).collect();
        let s = st.site_index(&p).expect("initial site inside box");
        for c in 0..k {
            st.amps[s * k + c] = spec.initial_coin[c] * scale;
        }
    }
    st
}

struct Stepper {
    k: usize,
    coin: Vec<Complex64>,
    /// For each arriving coin state c': the departing coin state and the
    /// site-index offset of where it came from.
    sources: Vec<(usize, Vec<i64>)>,
}

impl Stepper {
    fn new(spec: &WalkSpec) -> Self {
        let moves = spec.moves();
        let k = moves.len();
        let mut sources = vec![(0, Vec::new()); k];
        for (c, (disp, after)) in moves.into_iter().enumerate() {
            sources[after] = (c, disp);
        }
        Self { k, coin: spec.coin.data().to_vec(), sources }
    }

    fn site(&self, src: &JointState, s: usize, out: &mut [Complex64]) {
        let p = src.site_point(s);
        for (cp, (c, disp)) in self.sources.iter().enumerate() {
            let from: Vec<i64> = p.iter().zip(disp).map(|(a, b)| a - b).collect();
            out[cp] = match src.site_index(&from) {
                Some(f) => {
                    let psi = &src.amps[f * self.k..(f + 1) * self.k];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..self.k {
                        acc += self.coin[c * self.k + j] * psi[j];
                    }
                    acc
                }
                None => Complex64::new(0.0, 0.0),
            };
        }
    }

    fn step(&self, src: &JointState, dst: &mut JointState, policy: ExecPolicy) {
        let k = self.k;
        match policy {
            #[cfg(feature = "parallel")]
            ExecPolicy::Parallel => {
                use rayon::prelude::*;
                dst.amps
                    .par_chunks_mut(k)
                    .enumerate()
                    .with_min_len(256)
                    .for_each(|(s, out)| self.site(src, s, out));
            }
            _ => {
                for (s, out) in dst.amps.chunks_mut(k).enumerate() {
                    self.site(src, s, out);
                }
            }
        }
    }
}

/// Evolves any walk variant for `spec.steps` steps.
pub fn evolve(spec: &WalkSpec) -> Result<Evolution> {
    evolve_with(spec, ExecPolicy::default())
}

pub fn evolve_with(spec: &WalkSpec, policy: ExecPolicy) -> Result<Evolution> {
    spec.validate()?;
    let stepper = Stepper::new(spec);
    let mut cur = initial_state(spec);
    let mut next = cur.clone();
    for _ in 0..spec.steps {
        stepper.step(&cur, &mut next, policy);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(Evolution { distribution: cur.distribution(), state: cur })
}

/// Every distribution from step 0 through `spec.steps`.
pub fn evolve_prefixes(spec: &WalkSpec, policy: ExecPolicy) -> Result<Vec<Distribution>> {
    spec.validate()?;
    let stepper = Stepper::new(spec);
    let mut cur = initial_state(spec);
    let mut next = cur.clone();
    let mut out = vec![cur.distribution()];
    for _ in 0..spec.steps {
        stepper.step(&cur, &mut next, policy);
        std::mem::swap(&mut cur, &mut next);
        out.push(cur.distribution());
    }
    Ok(out)
}

fn require(spec: &WalkSpec, v: WalkVariant) -> Result<()> {
    if spec.variant != v {
        return domain(format!("expected a {} walk", v.name()));
    }
    Ok(())
}

pub fn evolve_line(spec: &WalkSpec) -> Result<Evolution> {
    require(spec, WalkVariant::Line)?;
    evolve(spec)
}

pub fn evolve_lazy(spec: &WalkSpec) -> Result<Evolution> {
    require(spec, WalkVariant::Lazy)?;
    evolve(spec)
}

pub fn evolve_lattice2d(spec: &WalkSpec) -> Result<Evolution> {
    require(spec, WalkVariant::Lattice2D)?;
    evolve(spec)
}

pub fn evolve_lattice_ddim(spec: &WalkSpec) -> Result<Evolution> {
    match spec.variant {
        WalkVariant::LatticeDdim(_) => evolve(spec),
        _ => domain("expected a D-dimensional lattice walk"),
    }
}

/// One application of the shift alone (no coin) on a joint state.
///
/// Exposed so the flip-flop involution can be checked directly.
pub fn shift_only(spec: &WalkSpec, state: &JointState) -> JointState {
    let mut s = spec.clone();
    s.coin = Matrix::identity(spec.variant.coin_dim());
    let stepper = Stepper::new(&s);
    let mut out = state.clone();
    stepper.step(state, &mut out, ExecPolicy::Sequential);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins;

    fn line(steps: usize) -> WalkSpec {
        WalkSpec::new(WalkVariant::Line, coins::hadamard(), steps)
    }

    #[test]
    fn line_first_steps() {
        let d0 = evolve_line(&line(0)).unwrap().distribution;
        assert_eq!(d0.p(0), 1.0);
        let d1 = evolve_line(&line(1)).unwrap().distribution;
        assert!((d1.p(-1) - 0.5).abs() < 1e-15);
        assert!((d1.p(1) - 0.5).abs() < 1e-15);
        let d2 = evolve_line(&line(2)).unwrap().distribution;
        assert!((d2.p(-2) - 0.25).abs() < 1e-15);
        assert!((d2.p(0) - 0.5).abs() < 1e-15);
        assert!((d2.p(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn mirrored_is_reflection() {
        let a = evolve(&line(7)).unwrap().distribution;
        let b = evolve(&line(7).with_orientation(Orientation::Mirrored)).unwrap().distribution;
        assert_eq!(a.map_points(|p| vec![-p[0]]), b);
    }

    #[test]
    fn parity_and_norm() {
        let e = evolve(&line(40)).unwrap();
        for (k, &p) in &e.distribution.entries {
            if (k[0] + 40) % 2 != 0 {
                assert_eq!(p, 0.0);
            }
        }
        assert!((e.distribution.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lazy_dft_step() {
        let s = WalkSpec::new(WalkVariant::Lazy, coins::dft(3), 1).with_initial_coin(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let d = evolve_lazy(&s).unwrap().distribution;
        for x in -1..=1 {
            assert!((d.p(x) - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn flip_flop_involution() {
        let s = WalkSpec::new(WalkVariant::Lattice2D, coins::grover(4), 3).with_uniform_coin();
        let st = evolve(&s).unwrap().state.padded(2);
        let twice = shift_only(&s, &shift_only(&s, &st));
        assert_eq!(twice.amps, st.amps);
    }

    #[test]
    fn rejects_bad_specs() {
        let s = WalkSpec::new(WalkVariant::Line, coins::grover(3), 1);
        assert!(evolve(&s).is_err());
        let s = line(1).with_initial_coin(vec![Complex64::new(1.0, 0.0); 2]);
        assert!(evolve(&s).is_err());
        let s = WalkSpec::new(WalkVariant::LatticeDdim(0), Matrix::identity(1), 0);
        assert!(evolve(&s).is_err());
        assert!(evolve_lazy(&line(1)).is_err());
    }

    #[test]
    fn uniform_extent_spreads_start() {
        let s = line(0).with_uniform_extent(2);
        let d = evolve(&s).unwrap().distribution;
        for x in -2..=2 {
            assert!((d.p(x) - 0.2).abs() < 1e-15);
        }
    }
}
