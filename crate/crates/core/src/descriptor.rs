//! Serde descriptors for channels, circuits and observables, shared by the
//! CLI and config files.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::BasisSet;
use crate::channel::{
    amplitude_damping, bit_flip, compose, depolarizing, over_rotation, phase_flip, tensor,
    PTMChannel, PauliChannelEta,
};
use crate::error::{QemError, Result};
use crate::gates;
use crate::pauli::PauliString;
use crate::qp::{quasi_probability, sampling_plan, SamplingPlan};
use crate::sim::{Circuit, Element, Observable};

/// Channel description as read from config files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelDescriptor {
    Depolarizing {
        n: usize,
        eps: f64,
    },
    BitFlip {
        p: f64,
    },
    PhaseFlip {
        p: f64,
    },
    AmplitudeDamping {
        delta: f64,
    },
    OverRotation {
        phi: f64,
    },
    Pauli {
        n: usize,
        eta: Vec<f64>,
    },
    /// Raw PTM, row-major.
    Ptm {
        n: usize,
        matrix: Vec<f64>,
    },
    /// Operation elements as row-major [re, im] pairs.
    Kraus {
        n: usize,
        matrices: Vec<Vec<[f64; 2]>>,
    },
    Tensor {
        factors: Vec<ChannelDescriptor>,
    },
    Compose {
        outer: Box<ChannelDescriptor>,
        inner: Box<ChannelDescriptor>,
    },
}

impl ChannelDescriptor {
    pub fn build(&self) -> Result<PTMChannel> {
        match self {
            ChannelDescriptor::Depolarizing { n, eps } => depolarizing(*n, *eps),
            ChannelDescriptor::BitFlip { p } => bit_flip(*p),
            ChannelDescriptor::PhaseFlip { p } => phase_flip(*p),
            ChannelDescriptor::AmplitudeDamping { delta } => amplitude_damping(*delta),
            ChannelDescriptor::OverRotation { phi } => over_rotation(*phi),
            ChannelDescriptor::Pauli { n, eta } => {
                let eta = PauliChannelEta::new(*n, DVector::from_row_slice(eta))?;
                Ok(eta.to_channel())
            }
            ChannelDescriptor::Ptm { n, matrix } => {
                let dim = 1usize << (2 * n);
                if matrix.len() != dim * dim {
                    return Err(QemError::InvalidDescriptor(format!(
                        "ptm needs {} entries, got {}",
                        dim * dim,
                        matrix.len()
                    )));
                }
                PTMChannel::from_ptm(*n, DMatrix::from_row_slice(dim, dim, matrix))
            }
            ChannelDescriptor::Kraus { n, matrices } => {
                let dim = 1usize << n;
                let mut kraus = Vec::with_capacity(matrices.len());
                for m in matrices {
                    if m.len() != dim * dim {
                        return Err(QemError::InvalidDescriptor(format!(
                            "kraus operator needs {} entries, got {}",
                            dim * dim,
                            m.len()
                        )));
                    }
                    let entries: Vec<Complex64> =
                        m.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                    kraus.push(DMatrix::from_row_slice(dim, dim, &entries));
                }
                if kraus.is_empty() {
                    return Err(QemError::InvalidDescriptor("empty kraus list".into()));
                }
                PTMChannel::from_kraus(kraus)
            }
            ChannelDescriptor::Tensor { factors } => {
                let built: Result<Vec<PTMChannel>> = factors.iter().map(|f| f.build()).collect();
                tensor(&built?)
            }
            ChannelDescriptor::Compose { outer, inner } => {
                compose(&outer.build()?, &inner.build()?)
            }
        }
    }
}

/// One circuit layer in a config file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ElementDescriptor {
    /// Named perfect gate; single-qubit names need `qubit` on wider circuits.
    Gate {
        name: String,
        #[serde(default)]
        qubit: Option<usize>,
    },
    /// Noise channel, optionally mitigated by quasi-probability sampling.
    Noise {
        channel: ChannelDescriptor,
        #[serde(default)]
        mitigate: bool,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermDescriptor {
    pub weight: f64,
    /// Pauli string like "Z" or "ZZ", qubit 0 first.
    pub pauli: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CircuitDescriptor {
    pub n: usize,
    pub elements: Vec<ElementDescriptor>,
    pub observable: Vec<TermDescriptor>,
}

fn widen_gate(gate: PTMChannel, n: usize, qubit: Option<usize>) -> Result<PTMChannel> {
    if gate.n() == n {
        return Ok(gate);
    }
    if gate.n() != 1 {
        return Err(QemError::InvalidDescriptor(format!(
            "{}-qubit gate in a {n}-qubit circuit",
            gate.n()
        )));
    }
    let q = qubit.ok_or_else(|| {
        QemError::InvalidDescriptor("single-qubit gate needs a qubit index".into())
    })?;
    if q >= n {
        return Err(QemError::InvalidDescriptor(format!(
            "qubit {q} out of range for n={n}"
        )));
    }
    let factors: Vec<PTMChannel> = (0..n)
        .map(|i| {
            if i == q {
                gate.clone()
            } else {
                PTMChannel::identity(1)
            }
        })
        .collect();
    tensor(&factors)
}

impl CircuitDescriptor {
    /// Builds the runnable circuit, its observable, and one sampling plan
    /// per mitigated layer (solved against `basis`).
    pub fn build(&self, basis: &BasisSet) -> Result<(Circuit, Observable, Vec<SamplingPlan>)> {
        if basis.n() != self.n {
            return Err(QemError::SizeMismatch(basis.n(), self.n));
        }
        let mut circuit = Circuit::new(self.n)?;
        let mut plans = Vec::new();
        for e in &self.elements {
            match e {
                ElementDescriptor::Gate { name, qubit } => {
                    let gate = widen_gate(gates::by_name(name)?, self.n, *qubit)?;
                    circuit.push(Element::Gate(gate))?;
                }
                ElementDescriptor::Noise { channel, mitigate } => {
                    let c = channel.build()?;
                    if *mitigate {
                        let mu = quasi_probability(&c, basis)?;
                        plans.push(sampling_plan(&mu, basis)?);
                        circuit.push(Element::Mitigated(c))?;
                    } else {
                        circuit.push(Element::Noise(c))?;
                    }
                }
            }
        }
        let mut terms = Vec::with_capacity(self.observable.len());
        for t in &self.observable {
            terms.push((t.weight, PauliString::parse(&t.pauli)?));
        }
        let observable = Observable::new(self.n, terms)?;
        Ok((circuit, observable, plans))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ggep;
    use crate::sim::run_exact;
    use approx::assert_abs_diff_eq;

    #[test]
    fn channel_descriptors_round_trip_json() {
        let cases = [
            r#"{"kind":"depolarizing","n":1,"eps":0.03}"#,
            r#"{"kind":"bit_flip","p":0.1}"#,
            r#"{"kind":"amplitude_damping","delta":0.3}"#,
            r#"{"kind":"over_rotation","phi":0.2}"#,
            r#"{"kind":"pauli","n":1,"eta":[0.9,0.05,0.03,0.02]}"#,
        ];
        for json in cases {
            let d: ChannelDescriptor = serde_json::from_str(json).unwrap();
            let c = d.build().unwrap();
            assert_eq!(c.n(), 1);
            let back = serde_json::to_string(&d).unwrap();
            let d2: ChannelDescriptor = serde_json::from_str(&back).unwrap();
            assert_eq!(d, d2);
        }
    }

    #[test]
    fn ptm_and_kraus_forms() {
        let dep = depolarizing(1, 0.03).unwrap();
        let row_major: Vec<f64> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| dep.matrix()[(i, j)])
            .collect();
        let d = ChannelDescriptor::Ptm {
            n: 1,
            matrix: row_major,
        };
        let c = d.build().unwrap();
        assert!((c.matrix() - dep.matrix()).norm() < 1e-14);

        let json = r#"{"kind":"kraus","n":1,"matrices":[[[1,0],[0,0],[0,0],[1,0]]]}"#;
        let d: ChannelDescriptor = serde_json::from_str(json).unwrap();
        // the lone operator is I (unnormalized rows given row-major)
        let c = d.build().unwrap();
        assert_abs_diff_eq!(ggep(&c), 0.0, epsilon = 1e-12);

        let bad = ChannelDescriptor::Ptm {
            n: 1,
            matrix: vec![1.0; 7],
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn tensor_and_compose_descriptors() {
        let d = ChannelDescriptor::Tensor {
            factors: vec![
                ChannelDescriptor::Depolarizing { n: 1, eps: 0.1 },
                ChannelDescriptor::BitFlip { p: 0.05 },
            ],
        };
        let c = d.build().unwrap();
        assert_eq!(c.n(), 2);

        let d = ChannelDescriptor::Compose {
            outer: Box::new(ChannelDescriptor::BitFlip { p: 0.1 }),
            inner: Box::new(ChannelDescriptor::PhaseFlip { p: 0.1 }),
        };
        assert_eq!(d.build().unwrap().n(), 1);
    }

    #[test]
    fn circuit_descriptor_builds_and_runs() {
        let json = r#"{
            "n": 1,
            "elements": [
                {"type": "gate", "name": "h"},
                {"type": "noise", "channel": {"kind": "depolarizing", "n": 1, "eps": 0.03}, "mitigate": true}
            ],
            "observable": [{"weight": 1.0, "pauli": "Z"}]
        }"#;
        let d: CircuitDescriptor = serde_json::from_str(json).unwrap();
        let basis = BasisSet::standard(1).unwrap();
        let (circuit, obs, plans) = d.build(&basis).unwrap();
        assert_eq!(plans.len(), 1);
        assert_abs_diff_eq!(run_exact(&circuit.ideal(), &obs).unwrap(), 0.0, epsilon = 1e-13);

        // two-qubit circuit with per-qubit gate placement
        let json = r#"{
            "n": 2,
            "elements": [
                {"type": "gate", "name": "x", "qubit": 0},
                {"type": "gate", "name": "cnot"},
                {"type": "noise", "channel": {"kind": "depolarizing", "n": 2, "eps": 0.01}}
            ],
            "observable": [{"weight": 1.0, "pauli": "ZZ"}]
        }"#;
        let d: CircuitDescriptor = serde_json::from_str(json).unwrap();
        let basis2 = BasisSet::standard(2).unwrap();
        let (circuit, obs, plans) = d.build(&basis2).unwrap();
        assert!(plans.is_empty());
        // |00> -> |11>, ZZ = +1, shrunk by the depolarizing factor
        let got = run_exact(&circuit, &obs).unwrap();
        assert_abs_diff_eq!(got, 1.0 - 0.01 * 16.0 / 15.0, epsilon = 1e-12);

        // missing qubit index for a single-qubit gate
        let json = r#"{
            "n": 2,
            "elements": [{"type": "gate", "name": "x"}],
            "observable": [{"weight": 1.0, "pauli": "ZZ"}]
        }"#;
        let d: CircuitDescriptor = serde_json::from_str(json).unwrap();
        assert!(d.build(&basis2).is_err());
    }
}
