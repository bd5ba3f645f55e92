//! Radial-basis interpolation over user-supplied simulation samples.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::qoi::Neutronics;
use crate::design::{DesignVector, DIM};
use crate::error::{Error, Result};
use crate::linalg::{in_convex_hull, lu_solve};

/// Design + neutronics samples, one row per simulated core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleTable {
    pub designs: Vec<DesignVector>,
    /// `(lifetime, sdm, f_dh, q_max)` per row.
    pub qoi: Vec<[f64; 4]>,
    /// Optional pass-through isothermal temperature coefficient column.
    #[serde(default)]
    pub itc: Option<Vec<f64>>,
}

impl SampleTable {
    pub fn new(designs: Vec<DesignVector>, qoi: Vec<[f64; 4]>, itc: Option<Vec<f64>>) -> Result<Self> {
        let t = SampleTable { designs, qoi, itc };
        t.check()?;
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.designs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.designs.is_empty()
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::SampleTable(m.to_string()));
        if self.designs.len() != self.qoi.len() {
            return bad("design and QoI row counts differ");
        }
        if let Some(itc) = &self.itc {
            if itc.len() != self.designs.len() {
                return bad("ITC column length differs from row count");
            }
        }
        if self.designs.len() < 2 {
            return bad("at least two samples are required");
        }
        for (i, (d, q)) in self.designs.iter().zip(&self.qoi).enumerate() {
            if d.to_array().iter().chain(q.iter()).any(|v| !v.is_finite()) {
                return Err(Error::SampleTable(alloc::format!("row {i} has a non-finite value")));
            }
        }
        let sites: Vec<[f64; DIM]> = self.designs.iter().map(|d| d.to_unit_cube()).collect();
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                if sites[i] == sites[j] {
                    return Err(Error::SampleTable(alloc::format!("rows {i} and {j} are duplicate sites")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Kernel {
    Linear,
    #[default]
    Cubic,
    ThinPlate,
    Gaussian { epsilon: f64 },
}

impl Kernel {
    fn apply(&self, r: f64) -> f64 {
        match *self {
            Kernel::Linear => r,
            Kernel::Cubic => r * r * r,
            Kernel::ThinPlate => {
                if r > 0.0 {
                    r * r * libm::log(r)
                } else {
                    0.0
                }
            }
            Kernel::Gaussian { epsilon } => libm::exp(-(epsilon * r) * (epsilon * r)),
        }
    }
}

/// Polynomial tail appended to the radial part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    None,
    Constant,
    Linear,
}

/// Interpolant of several outputs over a shared set of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct RbfInterpolator {
    sites: Vec<Vec<f64>>,
    kernel: Kernel,
    tail: Tail,
    /// Per output: site weights followed by tail coefficients.
    weights: Vec<Vec<f64>>,
}

impl RbfInterpolator {
    /// Fits exact interpolants for every column of `values` (one row per
    /// site). The default tail is linear when there are more sites than
    /// dimensions and constant otherwise.
    pub fn fit(sites: Vec<Vec<f64>>, values: &[Vec<f64>], kernel: Kernel, tail: Option<Tail>) -> Result<Self> {
        let n = sites.len();
        if n == 0 || values.len() != n {
            return Err(Error::SampleTable("site and value counts differ".to_string()));
        }
        let dim = sites[0].len();
        let tail = tail.unwrap_or(if n > dim { Tail::Linear } else { Tail::Constant });
        let p = tail_len(tail, dim);
        let size = n + p;
        let mut a = vec![0.0; size * size];
        for i in 0..n {
            for j in 0..n {
                a[i * size + j] = kernel.apply(distance(&sites[i], &sites[j]));
            }
            let basis = tail_basis(tail, &sites[i]);
            for (k, b) in basis.iter().enumerate() {
                a[i * size + n + k] = *b;
                a[(n + k) * size + i] = *b;
            }
        }
        let outputs = values[0].len();
        let mut weights = Vec::with_capacity(outputs);
        for o in 0..outputs {
            let mut rhs = vec![0.0; size];
            for i in 0..n {
                rhs[i] = values[i][o];
            }
            let w = lu_solve(a.clone(), size, rhs)
                .ok_or_else(|| Error::SampleTable("interpolation system is singular".to_string()))?;
            weights.push(w);
        }
        Ok(RbfInterpolator {
            sites,
            kernel,
            tail,
            weights,
        })
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let n = self.sites.len();
        let phi: Vec<f64> = self.sites.iter().map(|s| self.kernel.apply(distance(s, x))).collect();
        let basis = tail_basis(self.tail, x);
        self.weights
            .iter()
            .map(|w| {
                let radial: f64 = phi.iter().zip(&w[..n]).map(|(a, b)| a * b).sum();
                let poly: f64 = basis.iter().zip(&w[n..]).map(|(a, b)| a * b).sum();
                radial + poly
            })
            .collect()
    }

    pub fn sites(&self) -> &[Vec<f64>] {
        &self.sites
    }
}

fn tail_len(tail: Tail, dim: usize) -> usize {
    match tail {
        Tail::None => 0,
        Tail::Constant => 1,
        Tail::Linear => dim + 1,
    }
}

fn tail_basis(tail: Tail, x: &[f64]) -> Vec<f64> {
    match tail {
        Tail::None => Vec::new(),
        Tail::Constant => vec![1.0],
        Tail::Linear => core::iter::once(1.0).chain(x.iter().copied()).collect(),
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Interpolating neutronics model built from a [`SampleTable`] over
/// unit-cube-normalized designs.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularModel {
    rbf: RbfInterpolator,
    has_itc: bool,
}

impl TabularModel {
    pub fn new(samples: &SampleTable, kernel: Kernel) -> Result<Self> {
        Self::with_tail(samples, kernel, None)
    }

    pub fn with_tail(samples: &SampleTable, kernel: Kernel, tail: Option<Tail>) -> Result<Self> {
        samples.check()?;
        let sites: Vec<Vec<f64>> = samples.designs.iter().map(|d| d.to_unit_cube().to_vec()).collect();
        let values: Vec<Vec<f64>> = samples
            .qoi
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let mut v = q.to_vec();
                if let Some(itc) = &samples.itc {
                    v.push(itc[i]);
                }
                v
            })
            .collect();
        Ok(TabularModel {
            rbf: RbfInterpolator::fit(sites, &values, kernel, tail)?,
            has_itc: samples.itc.is_some(),
        })
    }

    pub fn eval(&self, d: &DesignVector) -> Neutronics {
        let z = d.to_unit_cube();
        let v = self.rbf.eval(&z);
        Neutronics {
            lifetime: v[0],
            sdm: v[1],
            f_dh: v[2],
            q_max: v[3],
            itc: self.has_itc.then(|| v[4]),
            extrapolated: !in_convex_hull(self.rbf.sites(), &z, 1e-9),
        }
    }
}

/// One-shot interpolation; prefer [`TabularModel`] for repeated queries.
pub fn tabular_eval(d: &DesignVector, samples: &SampleTable) -> Result<Neutronics> {
    Ok(TabularModel::new(samples, Kernel::default())?.eval(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_samples() -> SampleTable {
        let a = DesignVector::from_unit_cube(&[0.2; DIM]).unwrap();
        let b = DesignVector::from_unit_cube(&[0.8; DIM]).unwrap();
        SampleTable::new(
            vec![a, b],
            vec![[5.0, -6000.0, 1.3, 0.02], [9.0, -7000.0, 1.5, 0.01]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn reproduces_sites() {
        let t = two_samples();
        let m = TabularModel::new(&t, Kernel::Cubic).unwrap();
        let n = m.eval(&t.designs[1]);
        assert!((n.lifetime - 9.0).abs() < 1e-9);
        assert!((n.sdm + 7000.0).abs() < 1e-6);
    }

    #[test]
    fn linear_midpoint_is_mean() {
        let t = two_samples();
        let m = TabularModel::new(&t, Kernel::Linear).unwrap();
        let mid = DesignVector::from_unit_cube(&[0.5; DIM]).unwrap();
        let n = m.eval(&mid);
        assert!((n.lifetime - 7.0).abs() < 1e-9, "{}", n.lifetime);
        assert!((n.f_dh - 1.4).abs() < 1e-9);
        assert!(!n.extrapolated);
        let out = DesignVector::from_unit_cube(&[0.9; DIM]).unwrap();
        assert!(m.eval(&out).extrapolated);
    }

    #[test]
    fn duplicate_sites_rejected() {
        let a = DesignVector::NOMINAL;
        let e = SampleTable::new(vec![a, a], vec![[1.0; 4], [2.0; 4]], None).unwrap_err();
        assert!(matches!(e, Error::SampleTable(_)));
    }

    #[test]
    fn ragged_table_rejected() {
        let a = DesignVector::NOMINAL;
        assert!(SampleTable::new(vec![a], vec![[1.0; 4], [2.0; 4]], None).is_err());
        assert!(SampleTable::new(vec![a], vec![[1.0; 4]], None).is_err());
    }
}
