//! Seedable white-noise vectors and i.i.d. dictionaries.

use std::io::{BufRead, Write};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::output::fmt_f64;
use crate::rng::{stream, GENERATOR};

/// Entry law of the dictionary. Both variants have zero mean and unit variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DictionaryKind {
    #[default]
    Gaussian,
    /// Equiprobable `+1` / `-1`.
    Bernoulli,
}

impl DictionaryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DictionaryKind::Gaussian => "gaussian",
            DictionaryKind::Bernoulli => "bernoulli",
        }
    }
}

impl std::fmt::Display for DictionaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DictionaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(DictionaryKind::Gaussian),
            "bernoulli" => Ok(DictionaryKind::Bernoulli),
            other => Err(Error::Parse(format!("unknown dictionary kind `{other}`"))),
        }
    }
}

/// A noise realisation together with its dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub m: usize,
    pub n: usize,
    pub alpha: f64,
    pub kind: DictionaryKind,
    pub seed: u64,
    /// `m x n`.
    pub dictionary: DMatrix<f64>,
    pub omega: DVector<f64>,
}

/// `round(alpha * n)`.
pub fn measurement_count(n: usize, alpha: f64) -> usize {
    (alpha * n as f64).round() as usize
}

/// `m x n` dictionary, filled column by column.
pub fn draw_dictionary<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    kind: DictionaryKind,
    rng: &mut R,
) -> DMatrix<f64> {
    let data: Vec<f64> = match kind {
        DictionaryKind::Gaussian => (0..m * n).map(|_| rng.sample(StandardNormal)).collect(),
        DictionaryKind::Bernoulli => (0..m * n)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect(),
    };
    DMatrix::from_vec(m, n, data)
}

pub fn draw_noise<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_iterator(m, (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

/// Draws an instance. The dictionary and the noise come from separate
/// sub-streams of `seed`, labelled `"dictionary"` and `"noise"`.
pub fn draw_instance(
    n: usize,
    alpha: f64,
    kind: DictionaryKind,
    seed: u64,
) -> Result<ProblemInstance> {
    if n < 2 {
        return domain(format!("need at least 2 atoms, got n = {n}"));
    }
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha must lie in (0, 1], got {alpha}"));
    }
    let m = measurement_count(n, alpha);
    if m == 0 {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    let dictionary = draw_dictionary(m, n, kind, &mut stream(seed, "dictionary", &[]));
    let omega = draw_noise(m, &mut stream(seed, "noise", &[]));
    Ok(ProblemInstance {
        m,
        n,
        alpha,
        kind,
        seed,
        dictionary,
        omega,
    })
}

/// `D z / sqrt(n)`.
pub fn synthesize(dictionary: &DMatrix<f64>, z: &DVector<f64>) -> Result<DVector<f64>> {
    let n = dictionary.ncols();
    if z.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: z.len(),
        });
    }
    Ok(dictionary * z / (n as f64).sqrt())
}

impl ProblemInstance {
    /// Writes the instance as CSV.
    ///
    /// ```text
    /// m,n,kind,seed,generator
    /// <m>,<n>,<kind>,<seed>,<generator>
    /// row,omega,d_0,...,d_{n-1}
    /// 0,<omega_0>,<D_00>,...,<D_0(n-1)>
    /// ...
    /// ```
    ///
    /// The matrix is row-major; floats carry 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "m,n,kind,seed,generator")?;
        writeln!(w, "{},{},{},{},{}", self.m, self.n, self.kind, self.seed, GENERATOR)?;
        write!(w, "row,omega")?;
        for j in 0..self.n {
            write!(w, ",d_{j}")?;
        }
        writeln!(w)?;
        for i in 0..self.m {
            write!(w, "{i},{}", fmt_f64(self.omega[i]))?;
            for j in 0..self.n {
                write!(w, ",{}", fmt_f64(self.dictionary[(i, j)]))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("instance csv: {msg}"));
        let mut lines = r.lines();
        let mut next = || -> Result<String> { lines.next().ok_or_else(|| bad("truncated"))?.map_err(Error::from) };
        if next()?.trim() != "m,n,kind,seed,generator" {
            return Err(bad("unexpected header"));
        }
        let meta = next()?;
        let fields: Vec<&str> = meta.trim().split(',').collect();
        if fields.len() != 5 {
            return Err(bad("metadata row needs 5 fields"));
        }
        let m: usize = fields[0].parse().map_err(|_| bad("m"))?;
        let n: usize = fields[1].parse().map_err(|_| bad("n"))?;
        let kind: DictionaryKind = fields[2].parse()?;
        let seed: u64 = fields[3].parse().map_err(|_| bad("seed"))?;
        next()?;
        let mut omega = DVector::zeros(m);
        let mut dictionary = DMatrix::zeros(m, n);
        for i in 0..m {
            let line = next()?;
            let vals: Vec<&str> = line.trim().split(',').collect();
            if vals.len() != n + 2 {
                return Err(bad("row width"));
            }
            omega[i] = vals[1].parse().map_err(|_| bad("omega value"))?;
            for j in 0..n {
                dictionary[(i, j)] = vals[j + 2].parse().map_err(|_| bad("matrix value"))?;
            }
        }
        Ok(ProblemInstance {
            m,
            n,
            alpha: m as f64 / n as f64,
            kind,
            seed,
            dictionary,
            omega,
        })
    }
}
