//! Best-response tables and pure Nash equilibria on a strategy mesh.
//!
//! Rows of a best-response table are independent, so they are computed in
//! parallel; each row is a pure function of its opponent index, so the result
//! does not depend on the thread count.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mesh::{MeshSpec, StrategyIndex};
use crate::entangler::{EntanglerFamily, EntanglerSpec};
use crate::error::{Error, Result};
use crate::game::{GameTable, PayoffPair};
use crate::num::{CMatrix, CVector, Complex, TOL};

/// Payoffs within this distance of a row maximum are all best responses.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Responder {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Trig closed form for J₁(β); other families fall back to `Matrix`.
    #[default]
    ClosedForm,
    /// Explicit J†(U₁⊗U₂)J|00⟩ products.
    Matrix,
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" | "closed_form" => Ok(Self::ClosedForm),
            "matrix" => Ok(Self::Matrix),
            _ => Err(Error::Invalid {
                what: "backend",
                reason: format!("`{s}` is not closed-form or matrix"),
            }),
        }
    }
}

trait PairKernel: Sync {
    fn sq(&self, i1: usize, i2: usize) -> [f64; 4];
}

/// Per-strategy trig values so the pair formula is products only.
#[derive(Clone, Copy)]
struct Trig {
    c: f64,
    s: f64,
    cp: f64,
    sp: f64,
    ca: f64,
    sa: f64,
}

struct ClosedKernel {
    trig: Vec<Trig>,
    sb: f64,
    cb: f64,
}

impl ClosedKernel {
    fn new(mesh: &MeshSpec, beta: f64) -> Self {
        let trig = mesh
            .strategies()
            .iter()
            .map(|g| {
                let (s, c) = (g.theta() / 2.0).sin_cos();
                let (sp, cp) = g.phi().sin_cos();
                let (sa, ca) = g.alpha().sin_cos();
                Trig { c, s, cp, sp, ca, sa }
            })
            .collect();
        let (sb, cb) = beta.sin_cos();
        Self { trig, sb, cb }
    }
}

impl PairKernel for ClosedKernel {
    #[inline]
    fn sq(&self, i1: usize, i2: usize) -> [f64; 4] {
        let x = &self.trig[i1];
        let y = &self.trig[i2];
        // angle sums and differences via addition theorems
        let cos_pp = x.cp * y.cp - x.sp * y.sp;
        let sin_pp = x.sp * y.cp + x.cp * y.sp;
        let sin_aa = x.sa * y.ca + x.ca * y.sa;
        let cos_aa = x.ca * y.ca - x.sa * y.sa;
        let cos_pa = x.cp * y.ca + x.sp * y.sa;
        let sin_pa = x.sp * y.ca - x.cp * y.sa;
        let cos_ap = x.ca * y.cp + x.sa * y.sp;
        let sin_ap = x.sa * y.cp - x.ca * y.sp;
        let cc = x.c * y.c;
        let cs = x.c * y.s;
        let sc = x.s * y.c;
        let ss = x.s * y.s;
        let (sb, cb) = (self.sb, self.cb);

        let a_re = cc * cos_pp - ss * sin_aa * sb;
        let a_im = cc * sin_pp * cb;
        let b_re = cs * cos_pa + sc * sin_ap * sb;
        let b_im = cs * sin_pa * cb;
        let c_re = sc * cos_ap - cs * sin_pa * sb;
        let c_im = sc * sin_ap * cb;
        let d_re = ss * cos_aa + cc * sin_pp * sb;
        let d_im = ss * sin_aa * cb;
        [
            a_re * a_re + a_im * a_im,
            b_re * b_re + b_im * b_im,
            c_re * c_re + c_im * c_im,
            d_re * d_re + d_im * d_im,
        ]
    }
}

struct MatrixKernel {
    /// Row-major 2x2 entries of U per strategy.
    u: Vec<[Complex; 4]>,
    /// J|00⟩
    psi0: [Complex; 4],
    jdag: [[Complex; 4]; 4],
}

impl MatrixKernel {
    fn new(mesh: &MeshSpec, j: &CMatrix) -> Self {
        let u = mesh
            .strategies()
            .iter()
            .map(|g| g.matrix().as_slice().try_into().expect("2x2"))
            .collect();
        let psi0 = j
            .apply(&CVector::basis(4, 0))
            .expect("4x4")
            .as_slice()
            .try_into()
            .expect("dim 4");
        let d = j.dagger();
        let mut jdag = [[Complex::default(); 4]; 4];
        for (r, row) in jdag.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = d.get(r, c);
            }
        }
        Self { u, psi0, jdag }
    }
}

impl PairKernel for MatrixKernel {
    fn sq(&self, i1: usize, i2: usize) -> [f64; 4] {
        let u1 = &self.u[i1];
        let u2 = &self.u[i2];
        let p = &self.psi0;
        // (U1⊗U2)ψ with ψ indexed 2k + l
        let mut v = [Complex::default(); 4];
        for k in 0..2 {
            for l in 0..2 {
                let mut acc = Complex::default();
                for m in 0..2 {
                    for n in 0..2 {
                        acc += u1[2 * k + m] * u2[2 * l + n] * p[2 * m + n];
                    }
                }
                v[2 * k + l] = acc;
            }
        }
        let mut out = [0.0; 4];
        for (r, o) in out.iter_mut().enumerate() {
            let z: Complex = (0..4).map(|c| self.jdag[r][c] * v[c]).sum();
            *o = z.norm_sqr();
        }
        out
    }
}

enum Kernel {
    Closed(ClosedKernel),
    Matrix(Box<MatrixKernel>),
}

/// A game on a mesh with a fixed entangler, ready for best-response queries.
pub struct PayoffGrid {
    game: GameTable,
    mesh: MeshSpec,
    n: usize,
    kernel: Kernel,
}

impl PayoffGrid {
    pub fn new(game: &GameTable, spec: &EntanglerSpec, mesh: &MeshSpec, backend: Backend) -> Self {
        let kernel = match (backend, spec.family()) {
            (Backend::ClosedForm, EntanglerFamily::J1) => Kernel::Closed(ClosedKernel::new(mesh, spec.beta())),
            (Backend::ClosedForm, EntanglerFamily::Identity) => Kernel::Closed(ClosedKernel::new(mesh, 0.0)),
            _ => Kernel::Matrix(Box::new(MatrixKernel::new(mesh, &spec.matrix()))),
        };
        Self {
            game: game.clone(),
            mesh: *mesh,
            n: mesh.num_strategies(),
            kernel,
        }
    }

    /// Grid for an arbitrary 4x4 unitary J, evaluated by matrix products.
    pub fn from_matrix(game: &GameTable, j: &CMatrix, mesh: &MeshSpec) -> Result<Self> {
        if j.rows() != 4 || j.cols() != 4 {
            return Err(Error::DimensionMismatch {
                op: "payoff grid",
                left: (j.rows(), j.cols()),
                right: (4, 4),
            });
        }
        let deviation = j.unitarity_deviation()?;
        if deviation > TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            game: game.clone(),
            mesh: *mesh,
            n: mesh.num_strategies(),
            kernel: Kernel::Matrix(Box::new(MatrixKernel::new(mesh, j))),
        })
    }

    pub fn mesh(&self) -> &MeshSpec {
        &self.mesh
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sq_amplitudes(&self, i1: StrategyIndex, i2: StrategyIndex) -> [f64; 4] {
        self.sq0(i1.zero_based(), i2.zero_based())
    }

    pub fn payoff(&self, i1: StrategyIndex, i2: StrategyIndex) -> PayoffPair {
        self.game.payoffs_from_sq(&self.sq_amplitudes(i1, i2))
    }

    fn sq0(&self, i1: usize, i2: usize) -> [f64; 4] {
        match &self.kernel {
            Kernel::Closed(k) => k.sq(i1, i2),
            Kernel::Matrix(k) => k.sq(i1, i2),
        }
    }

    pub fn best_responses(&self, responder: Responder) -> BestResponseTable {
        let sets = match &self.kernel {
            Kernel::Closed(k) => br_sets(k, &self.game, self.n, responder),
            Kernel::Matrix(k) => br_sets(k.as_ref(), &self.game, self.n, responder),
        };
        BestResponseTable { responder, sets }
    }

    pub fn find_pure_ne(&self, beta: f64) -> NeResult {
        let (br1, br2) = rayon::join(
            || self.best_responses(Responder::One),
            || self.best_responses(Responder::Two),
        );
        let mut pairs = Vec::new();
        for (i1, row) in br2.sets.iter().enumerate() {
            for &i2 in row {
                if br1.sets[i2 as usize].binary_search(&(i1 as u32)).is_ok() {
                    let pay = self.game.payoffs_from_sq(&self.sq0(i1, i2 as usize));
                    pairs.push(NePair {
                        i1: StrategyIndex::from_zero_based(i1),
                        i2: StrategyIndex::from_zero_based(i2 as usize),
                        p1: pay.p1,
                        p2: pay.p2,
                    });
                }
            }
        }
        NeResult {
            beta,
            found: !pairs.is_empty(),
            pairs,
        }
    }

    /// Direct check that neither player gains by deviating anywhere on the mesh.
    pub fn is_equilibrium(&self, i1: StrategyIndex, i2: StrategyIndex) -> bool {
        let (a, b) = (i1.zero_based(), i2.zero_based());
        let here = self.game.payoffs_from_sq(&self.sq0(a, b));
        let p1_ok = (0..self.n)
            .into_par_iter()
            .all(|i| self.game.payoffs_from_sq(&self.sq0(i, b)).p1 <= here.p1 + TIE_TOL);
        let p2_ok = (0..self.n)
            .into_par_iter()
            .all(|i| self.game.payoffs_from_sq(&self.sq0(a, i)).p2 <= here.p2 + TIE_TOL);
        p1_ok && p2_ok
    }
}

fn br_sets<K: PairKernel>(k: &K, game: &GameTable, n: usize, responder: Responder) -> Vec<Vec<u32>> {
    (0..n)
        .into_par_iter()
        .map_init(
            || vec![0.0f64; n],
            |buf, opp| {
                match responder {
                    Responder::Two => {
                        for (i, slot) in buf.iter_mut().enumerate() {
                            *slot = game.payoffs_from_sq(&k.sq(opp, i)).p2;
                        }
                    }
                    Responder::One => {
                        for (i, slot) in buf.iter_mut().enumerate() {
                            *slot = game.payoffs_from_sq(&k.sq(i, opp)).p1;
                        }
                    }
                }
                let max = buf.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                buf.iter()
                    .enumerate()
                    .filter(|(_, &p)| p >= max - TIE_TOL)
                    .map(|(i, _)| i as u32)
                    .collect()
            },
        )
        .collect()
}

/// For each opponent index, the sorted set of responder indices attaining the
/// row maximum within `TIE_TOL`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestResponseTable {
    responder: Responder,
    sets: Vec<Vec<u32>>,
}

impl BestResponseTable {
    pub fn responder(&self) -> Responder {
        self.responder
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn responses(&self, opponent: StrategyIndex) -> Vec<StrategyIndex> {
        self.sets[opponent.zero_based()]
            .iter()
            .map(|&i| StrategyIndex::from_zero_based(i as usize))
            .collect()
    }

    pub fn contains(&self, opponent: StrategyIndex, response: StrategyIndex) -> bool {
        self.sets[opponent.zero_based()]
            .binary_search(&(response.zero_based() as u32))
            .is_ok()
    }
}

pub fn best_response_table(
    game: &GameTable,
    j: &CMatrix,
    mesh: &MeshSpec,
    responder: Responder,
) -> Result<BestResponseTable> {
    Ok(PayoffGrid::from_matrix(game, j, mesh)?.best_responses(responder))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NePair {
    pub i1: StrategyIndex,
    pub i2: StrategyIndex,
    pub p1: f64,
    pub p2: f64,
}

impl NePair {
    pub fn payoffs(&self) -> PayoffPair {
        PayoffPair {
            p1: self.p1,
            p2: self.p2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeResult {
    pub beta: f64,
    pub found: bool,
    pub pairs: Vec<NePair>,
}

impl NeResult {
    /// The equilibrium with the largest p1 + p2; ties go to the lowest
    /// (i1, i2), which is the first such pair in the sorted list.
    pub fn best(&self) -> Option<&NePair> {
        self.pairs.iter().fold(None, |best: Option<&NePair>, p| match best {
            Some(b) if b.p1 + b.p2 >= p.p1 + p.p2 => Some(b),
            _ => Some(p),
        })
    }
}

pub fn find_pure_ne(game: &GameTable, spec: &EntanglerSpec, mesh: &MeshSpec) -> NeResult {
    find_pure_ne_with(game, spec, mesh, Backend::ClosedForm)
}

pub fn find_pure_ne_with(game: &GameTable, spec: &EntanglerSpec, mesh: &MeshSpec, backend: Backend) -> NeResult {
    PayoffGrid::new(game, spec, mesh, backend).find_pure_ne(spec.beta())
}

/// `steps` evenly spaced values from `min` to `max`, endpoints exact.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps)
            .map(|k| {
                if k == steps - 1 {
                    max
                } else {
                    min + (max - min) * k as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<NeResult>,
    /// Last swept β with an equilibrium.
    pub beta_c: Option<f64>,
}

impl SweepReport {
    /// Best-pair payoffs never decrease along consecutive found rows.
    pub fn is_monotone(&self, slack: f64) -> bool {
        let best: Vec<&NePair> = self.rows.iter().filter_map(NeResult::best).collect();
        best.windows(2)
            .all(|w| w[1].p1 >= w[0].p1 - slack && w[1].p2 >= w[0].p2 - slack)
    }

    /// Every row up to β_c has an equilibrium and none after it does.
    pub fn is_bracketed(&self) -> bool {
        match self.beta_c {
            None => self.rows.iter().all(|r| !r.found),
            Some(bc) => self.rows.iter().all(|r| r.found == (r.beta <= bc)),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,found,i1,i2,p1,p2\n");
        for r in &self.rows {
            match r.best() {
                Some(p) => writeln!(out, "{},true,{},{},{},{}", r.beta, p.i1, p.i2, p.p1, p.p2),
                None => writeln!(out, "{},false,,,,", r.beta),
            }
            .expect("writing to a String");
        }
        match self.beta_c {
            Some(bc) => writeln!(out, "# beta_c={bc}"),
            None => writeln!(out, "# beta_c=none"),
        }
        .expect("writing to a String");
        out
    }
}

pub fn sweep_beta(game: &GameTable, family: EntanglerFamily, mesh: &MeshSpec, betas: &[f64]) -> Result<SweepReport> {
    sweep_beta_with(game, family, mesh, betas, Backend::ClosedForm)
}

pub fn sweep_beta_with(
    game: &GameTable,
    family: EntanglerFamily,
    mesh: &MeshSpec,
    betas: &[f64],
    backend: Backend,
) -> Result<SweepReport> {
    if betas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invalid {
            what: "beta grid",
            reason: "values must be sorted ascending".into(),
        });
    }
    let specs = betas
        .iter()
        .map(|&b| EntanglerSpec::new(family, b))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<NeResult> = specs
        .iter()
        .map(|s| find_pure_ne_with(game, s, mesh, backend))
        .collect();
    let beta_c = rows.iter().rev().find(|r| r.found).map(|r| r.beta);
    Ok(SweepReport { rows, beta_c })
}
