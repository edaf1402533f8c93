//! Runs synthesized circuits as walks and checks them against the oracle.

use num_complex::Complex64;

use crate::distribution::Distribution;
use crate::error::{domain, Error, Result};
use crate::gates::{run_circuit_with, Circuit, ExecPolicy};
use crate::mapping::{
    binary_mapping, decode_lattice, encode_lattice, naive_mapping_demo, PositionMapping, Variant,
};
use crate::oracle::{evolve_prefixes, Orientation, WalkSpec, WalkVariant};
use crate::state::{measure_register, StateVector};
use crate::synth::{coin_matrix_for, Synthesized};

pub const DISTRIBUTION_TOL: f64 = 1e-10;

/// Circuits plus what is needed to read positions back out.
#[derive(Debug, Clone)]
pub struct CircuitWalk {
    pub circuits: Synthesized,
    pub mapping: PositionMapping,
    pub dims: usize,
}

/// Per-axis mapping a circuit was built for, from its metadata.
pub fn mapping_from_metadata(c: &Circuit) -> Result<PositionMapping> {
    let get = |k: &str| {
        c.meta_i64(k)
            .map(|v| v as usize)
            .ok_or_else(|| Error::Domain(format!("circuit metadata lacks {k:?}")))
    };
    let scheme = c.meta_str("scheme").unwrap_or("odd-balanced");
    let variant: Variant = c.meta_str("variant").unwrap_or("primary").parse()?;
    match scheme {
        "odd-balanced" | "even-staircase" => PositionMapping::generated(get("d")?, get("n_digits")?, variant),
        "binary-table" => binary_mapping(get("n_digits")?),
        "naive-table" => naive_mapping_demo(),
        other => domain(format!("unknown scheme {other:?} in circuit metadata")),
    }
}

impl CircuitWalk {
    pub fn new(circuits: Synthesized, mapping: PositionMapping) -> Self {
        let dims = circuits.for_step(1).meta_i64("dims").unwrap_or(1) as usize;
        Self { circuits, mapping, dims }
    }

    /// Circuits as loaded from files: one, an odd/even pair (by their
    /// `phase`), or a pipeline of step windows.
    pub fn from_circuits(mut list: Vec<Circuit>) -> Result<Self> {
        if list.iter().any(|c| c.spec != list[0].spec) {
            return domain("circuits act on different registers");
        }
        let phase = |c: &Circuit| c.meta_str("phase").map(str::to_string);
        let circuits = match list.len() {
            0 => return domain("no circuits given"),
            1 => Synthesized::Single(list.remove(0)),
            2 if phase(&list[0]).is_some() || phase(&list[1]).is_some() => {
                if phase(&list[0]).as_deref() == Some("even-steps") {
                    list.swap(0, 1);
                }
                if phase(&list[0]).as_deref() != Some("odd-steps") || phase(&list[1]).as_deref() != Some("even-steps") {
                    return domain("an alternating pair needs one odd-steps and one even-steps circuit");
                }
                let even = list.pop().unwrap();
                let odd = list.pop().unwrap();
                Synthesized::Alternating { odd, even }
            }
            _ => {
                let window = |c: &Circuit| (c.meta_i64("steps_first"), c.meta_i64("steps_last"));
                let mut next = 1;
                list.sort_by_key(|c| window(c).0);
                for c in &list {
                    match window(c) {
                        (Some(f), Some(l)) if f == next && l >= f => next = l + 1,
                        _ => return domain("pipeline windows must tile the steps from 1 without gaps"),
                    }
                }
                Synthesized::Windowed(list)
            }
        };
        let mapping = mapping_from_metadata(circuits.for_step(1))?;
        Ok(Self::new(circuits, mapping))
    }

    fn position_wires(&self) -> Vec<usize> {
        (self.dims..self.dims + self.dims * self.mapping.n_digits).collect()
    }

    fn origin(&self) -> Result<StateVector> {
        let spec = self.circuits.for_step(1).spec.clone();
        let mut digits = vec![0; self.dims];
        digits.extend(encode_lattice(&vec![0; self.dims], &self.mapping)?);
        let mut s = StateVector::zero(spec.clone());
        s.amplitudes_mut()[spec.flat_index(&digits)?] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    fn decode(&self, state: &StateVector) -> Result<Decoded> {
        let mut dist = Distribution::new(self.dims);
        let mut unmapped = 0.0;
        for (code, p) in measure_register(state, &self.position_wires())? {
            match decode_lattice(&code, &self.mapping) {
                Ok(point) => dist.add(point, p),
                Err(Error::NotInRange(_)) => unmapped += p,
                Err(e) => return Err(e),
            }
        }
        Ok(Decoded { dist, unmapped })
    }

    /// Register state after `steps` applications.
    pub fn final_state(&self, steps: usize, policy: ExecPolicy) -> Result<StateVector> {
        let mut s = self.origin()?;
        for k in 1..=steps {
            run_circuit_with(&mut s, self.circuits.for_step(k), policy)?;
        }
        Ok(s)
    }

    /// Decoded distributions after 0, 1, …, `steps` applications.
    pub fn simulate(&self, steps: usize, policy: ExecPolicy) -> Result<Vec<Decoded>> {
        let mut s = self.origin()?;
        let mut out = vec![self.decode(&s)?];
        for k in 1..=steps {
            run_circuit_with(&mut s, self.circuits.for_step(k), policy)?;
            out.push(self.decode(&s)?);
        }
        Ok(out)
    }

    /// Oracle walk with the circuit's coin and orientation.
    pub fn oracle_spec(&self, steps: usize) -> Result<WalkSpec> {
        let c = self.circuits.for_step(1);
        if self.dims == 1 {
            let coin = coin_matrix_for(c, 2)?;
            let step = c.meta_i64("coin0_step").unwrap_or(-1);
            Ok(WalkSpec::new(WalkVariant::Line, coin, steps)
                .with_orientation(Orientation::from_coin0_step(step)))
        } else {
            let coin = coin_matrix_for(c, 2 * self.dims)?;
            Ok(WalkSpec::new(WalkVariant::LatticeDdim(self.dims), coin, steps))
        }
    }
}

/// Position distribution read from a circuit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub dist: Distribution,
    /// Probability on codes the mapping does not use.
    pub unmapped: f64,
}

impl Decoded {
    /// TVD to `other`, with unmapped codes counted as extra outcomes.
    pub fn tvd(&self, other: &Distribution) -> f64 {
        self.dist.tvd(other) + 0.5 * self.unmapped
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    /// TVD after 0, 1, …, steps.
    pub tvd: Vec<f64>,
    pub tolerance: f64,
}

impl CompareReport {
    pub fn max_tvd(&self) -> f64 {
        self.tvd.iter().copied().fold(0.0, f64::max)
    }

    /// First prefix length whose TVD exceeds the tolerance.
    pub fn first_failure(&self) -> Option<usize> {
        self.tvd.iter().position(|&t| t > self.tolerance)
    }

    pub fn passes(&self) -> bool {
        self.first_failure().is_none()
    }
}

/// Circuit-vs-oracle TVD at every prefix up to `steps`.
pub fn compare(walk: &CircuitWalk, steps: usize, policy: ExecPolicy) -> Result<CompareReport> {
    let circuit = walk.simulate(steps, policy)?;
    let oracle = evolve_prefixes(&walk.oracle_spec(steps)?, policy)?;
    let tvd = circuit.iter().zip(&oracle).map(|(c, o)| c.tvd(o)).collect();
    Ok(CompareReport { tvd, tolerance: DISTRIBUTION_TOL })
}

/// Like [`compare`] but fails with a verification error past tolerance.
pub fn verify(walk: &CircuitWalk, steps: usize, policy: ExecPolicy) -> Result<CompareReport> {
    let r = compare(walk, steps, policy)?;
    match r.first_failure() {
        None => Ok(r),
        Some(k) => Err(Error::Verification(format!(
            "step {k}: TVD {:.3e} exceeds {:.0e}",
            r.tvd[k], r.tolerance
        ))),
    }
}
