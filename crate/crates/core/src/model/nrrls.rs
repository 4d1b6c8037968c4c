use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Coefficients, Hyperparams, Label, LabeledSample, TargetCoding, Weighting};
use crate::error::{Error, Result};
use crate::linalg::{axpy, matmul_into, matvec_into, symmetrize_in_place, Lu, Mat};

pub const SNAPSHOT_FORMAT_VERSION: u32 = 1;
const SNAPSHOT_MAGIC: &str = "nrrls-moment-state";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub n_neg: u64,
    pub n_pos: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.n_neg + self.n_pos
    }

    pub fn get(&self, y: Label) -> u64 {
        match y {
            Label::Negative => self.n_neg,
            Label::Positive => self.n_pos,
        }
    }

    fn bump(&mut self, y: Label) -> u64 {
        let n = match y {
            Label::Negative => &mut self.n_neg,
            Label::Positive => &mut self.n_pos,
        };
        *n += 1;
        *n
    }
}

/// Scratch buffers reused across steps so an update does not allocate.
#[derive(Debug, Clone)]
struct Workspace {
    m: Mat,
    x: Mat,
    g_inv: Mat,
    lu: Lu,
    u: Vec<f64>,
    v: Vec<f64>,
    z: Vec<f64>,
}

impl Workspace {
    fn new(d: usize) -> Self {
        Workspace {
            m: Mat::zeros(d, d),
            x: Mat::zeros(d, d),
            g_inv: Mat::zeros(d, d),
            lu: Lu::factor(&Mat::identity(d)).expect("identity factors"),
            u: vec![0.0; d],
            v: vec![0.0; d],
            z: vec![0.0; d],
        }
    }
}

/// Online total-error-rate learner (non-iteratively reweighted RLS).
///
/// Holds the class-conditional moments and the inverse of
/// `S⁻ + S⁺ + bI`. Each [`NrRls::step`] replaces the old class weight
/// `1/n_{t-1}` with `1/n_t` on the accumulated inverse in two
/// Sherman–Morrison–Woodbury stages, so after `t` samples the returned
/// coefficients equal the batch TER solution on those samples.
#[derive(Debug, Clone)]
pub struct NrRls {
    hp: Hyperparams,
    counts: ClassCounts,
    s_neg: Mat,
    s_pos: Mat,
    z_neg: Vec<f64>,
    z_pos: Vec<f64>,
    r_inv: Mat,
    w: Coefficients,
    ws: Workspace,
}

impl NrRls {
    pub fn new(hp: Hyperparams) -> Result<Self> {
        hp.validate()?;
        let d = hp.dim;
        let mut r_inv = Mat::identity(d);
        r_inv.scale_in_place(1.0 / hp.b);
        Ok(NrRls {
            hp,
            counts: ClassCounts::default(),
            s_neg: Mat::zeros(d, d),
            s_pos: Mat::zeros(d, d),
            z_neg: vec![0.0; d],
            z_pos: vec![0.0; d],
            r_inv,
            w: Coefficients::zeros(d),
            ws: Workspace::new(d),
        })
    }

    pub fn hyperparams(&self) -> &Hyperparams {
        &self.hp
    }

    pub fn dim(&self) -> usize {
        self.hp.dim
    }

    pub fn counts(&self) -> ClassCounts {
        self.counts
    }

    pub fn s_neg(&self) -> &Mat {
        &self.s_neg
    }

    pub fn s_pos(&self) -> &Mat {
        &self.s_pos
    }

    pub fn z_neg(&self) -> &[f64] {
        &self.z_neg
    }

    pub fn z_pos(&self) -> &[f64] {
        &self.z_pos
    }

    pub fn r_inv(&self) -> &Mat {
        &self.r_inv
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.w
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        super::predict(&self.w, x)
    }

    pub fn classify(&self, x: &[f64]) -> Label {
        super::classify(self.score(x), self.hp.targets.tau)
    }

    /// Absorbs one sample and returns the updated coefficients.
    ///
    /// On error the state is left as it was before the call.
    pub fn step(&mut self, sample: &LabeledSample) -> Result<&Coefficients> {
        self.update(&sample.x, sample.y)
    }

    pub fn update(&mut self, x: &[f64], y: Label) -> Result<&Coefficients> {
        let d = self.hp.dim;
        if x.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: x.len() });
        }
        // Weight applied to the old class moment (`shrink`) and to the new
        // sample (`gain`). Only the arriving class has a nonzero weight, so
        // 1/n is never evaluated on a class count that is still zero.
        let mut counts = self.counts;
        let n_class = counts.bump(y);
        let (shrink, gain) = match self.hp.weighting {
            Weighting::Rebalanced => {
                let beta = 1.0 / n_class as f64;
                (beta, beta)
            }
            Weighting::FixedBalanced => (0.0, 1.0),
        };

        let ws = &mut self.ws;
        let s_prev = match y {
            Label::Negative => &self.s_neg,
            Label::Positive => &self.s_pos,
        };

        // G⁻¹ = R⁻¹ + R⁻¹ (I - βSR⁻¹)⁻¹ βSR⁻¹
        if shrink != 0.0 && n_class > 1 {
            matmul_into(s_prev, &self.r_inv, &mut ws.m)?;
            ws.m.scale_in_place(shrink);
            ws.x.copy_from(&ws.m);
            ws.x.scale_in_place(-1.0);
            ws.x.add_identity(1.0);
            let step = counts.total();
            ws.lu
                .refactor(&ws.x)
                .map_err(|_| Error::NumericalSingularity { step })?;
            ws.x.copy_from(&ws.m);
            ws.lu.solve_in_place(&mut ws.x)?;
            matmul_into(&self.r_inv, &ws.x, &mut ws.g_inv)?;
            ws.g_inv.add_scaled(1.0, &self.r_inv);
        } else {
            ws.g_inv.copy_from(&self.r_inv);
        }

        // R⁻¹ = G⁻¹ - β G⁻¹x xᵀG⁻¹ / (1 + β xᵀG⁻¹x)
        matvec_into(&ws.g_inv, x, &mut ws.u)?;
        ws.v.fill(0.0);
        for (row, &xi) in ws.g_inv.row_iter().zip(x) {
            axpy(xi, row, &mut ws.v);
        }
        let quad: f64 = x.iter().zip(&ws.u).map(|(a, b)| a * b).sum();
        let denom = 1.0 + gain * quad;
        if !denom.is_finite() || denom.abs() <= f64::EPSILON {
            return Err(Error::NumericalSingularity { step: counts.total() });
        }
        let mut r_next = ws.g_inv.clone();
        r_next.add_outer(-gain / denom, &ws.u, &ws.v);
        symmetrize_in_place(&mut r_next);
        if !r_next.is_finite() {
            return Err(Error::NumericalSingularity { step: counts.total() });
        }

        // commit
        let target = self.hp.targets.target(y);
        let (s, z) = match y {
            Label::Negative => (&mut self.s_neg, &mut self.z_neg),
            Label::Positive => (&mut self.s_pos, &mut self.z_pos),
        };
        s.scale_in_place(1.0 - shrink);
        s.add_outer(gain, x, x);
        for (zi, &xi) in z.iter_mut().zip(x) {
            *zi = (1.0 - shrink) * *zi + gain * xi * target;
        }
        self.r_inv = r_next;
        self.counts = counts;
        self.refresh_coefficients();
        Ok(&self.w)
    }

    fn refresh_coefficients(&mut self) {
        for (zi, (a, b)) in self.ws.z.iter_mut().zip(self.z_neg.iter().zip(&self.z_pos)) {
            *zi = a + b;
        }
        let w = self.w.as_mut_vec();
        for (wi, row) in w.iter_mut().zip(self.r_inv.row_iter()) {
            *wi = row.iter().zip(&self.ws.z).map(|(a, b)| a * b).sum();
        }
    }

    /// Text snapshot of the full state at 17 significant digits.
    pub fn to_snapshot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{SNAPSHOT_MAGIC} {SNAPSHOT_FORMAT_VERSION}");
        let _ = writeln!(out, "dim {}", self.hp.dim);
        let _ = writeln!(out, "b {:.16e}", self.hp.b);
        let _ = writeln!(out, "weighting {}", self.hp.weighting.name());
        let _ = writeln!(out, "tau {:.16e}", self.hp.targets.tau);
        let _ = writeln!(out, "eta {:.16e}", self.hp.targets.eta);
        let _ = writeln!(out, "counts {} {}", self.counts.n_neg, self.counts.n_pos);
        let mut line = |name: &str, vals: &[f64]| {
            out.push_str(name);
            for v in vals {
                let _ = write!(out, " {v:.16e}");
            }
            out.push('\n');
        };
        line("s_neg", self.s_neg.as_slice());
        line("s_pos", self.s_pos.as_slice());
        line("z_neg", &self.z_neg);
        line("z_pos", &self.z_pos);
        line("r_inv", self.r_inv.as_slice());
        out
    }

    pub fn from_snapshot(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Snapshot(msg.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty snapshot"))?;
        let mut hw = header.split_whitespace();
        if hw.next() != Some(SNAPSHOT_MAGIC) {
            return Err(bad("missing header"));
        }
        let version: u32 = hw
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("missing format version"))?;
        if version != SNAPSHOT_FORMAT_VERSION {
            return Err(Error::Snapshot(format!("unsupported format version {version}")));
        }

        let mut field = |key: &str| -> Result<Vec<String>> {
            let line = lines.next().ok_or_else(|| Error::Snapshot(format!("missing `{key}`")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(Error::Snapshot(format!("expected `{key}`")));
            }
            Ok(parts.map(str::to_string).collect())
        };
        let floats = |vals: Vec<String>, n: usize, key: &str| -> Result<Vec<f64>> {
            if vals.len() != n {
                return Err(Error::Snapshot(format!("`{key}` needs {n} values, has {}", vals.len())));
            }
            vals.iter()
                .map(|v| v.parse::<f64>().map_err(|_| Error::Snapshot(format!("bad number in `{key}`"))))
                .collect()
        };
        let scalar = |vals: Vec<String>, key: &str| -> Result<String> {
            match vals.as_slice() {
                [v] => Ok(v.clone()),
                _ => Err(Error::Snapshot(format!("`{key}` takes one value"))),
            }
        };

        let dim: usize = scalar(field("dim")?, "dim")?.parse().map_err(|_| bad("bad dim"))?;
        let b = floats(field("b")?, 1, "b")?[0];
        let weighting: Weighting = scalar(field("weighting")?, "weighting")?.parse()?;
        let tau = floats(field("tau")?, 1, "tau")?[0];
        let eta = floats(field("eta")?, 1, "eta")?[0];
        let counts = field("counts")?;
        if counts.len() != 2 {
            return Err(bad("`counts` takes two values"));
        }
        let n_neg = counts[0].parse().map_err(|_| bad("bad count"))?;
        let n_pos = counts[1].parse().map_err(|_| bad("bad count"))?;
        let s_neg = floats(field("s_neg")?, dim * dim, "s_neg")?;
        let s_pos = floats(field("s_pos")?, dim * dim, "s_pos")?;
        let z_neg = floats(field("z_neg")?, dim, "z_neg")?;
        let z_pos = floats(field("z_pos")?, dim, "z_pos")?;
        let r_inv = floats(field("r_inv")?, dim * dim, "r_inv")?;

        let hp = Hyperparams { b, dim, weighting, targets: TargetCoding { tau, eta } };
        let mut state = NrRls::new(hp)?;
        state.counts = ClassCounts { n_neg, n_pos };
        state.s_neg = Mat::from_row_major(dim, dim, s_neg);
        state.s_pos = Mat::from_row_major(dim, dim, s_pos);
        state.z_neg = z_neg;
        state.z_pos = z_pos;
        state.r_inv = Mat::from_row_major(dim, dim, r_inv);
        state.refresh_coefficients();
        Ok(state)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_snapshot()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_snapshot(&text)
    }

    /// Bitwise state equality, ignoring scratch buffers.
    pub fn same_state(&self, other: &NrRls) -> bool {
        self.hp == other.hp
            && self.counts == other.counts
            && self.s_neg == other.s_neg
            && self.s_pos == other.s_pos
            && self.z_neg == other.z_neg
            && self.z_pos == other.z_pos
            && self.r_inv == other.r_inv
    }
}
