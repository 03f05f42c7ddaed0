use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ONE};

use super::circuit::{gate_count, gate_qubits, BrickWallCircuit};
use super::{transfer, Mps, SiteTensor};

/// Environments whose largest singular value is below this leave the gate unchanged.
const ZERO_ENV: f64 = 1e-14;

/// Starting gates for each restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    /// Haar-random gates; restart `r` uses seed `seed + r`.
    Random { seed: u64 },
    /// Identity gates (a single run, restarts are redundant).
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressOptions {
    pub layers: usize,
    /// Bond cap for the intermediate states.
    pub chi: usize,
    pub max_sweeps: usize,
    /// Gate passes per layer visit.
    pub inner_iters: usize,
    /// Stop when the cost changes by less than this over a sweep.
    pub tol: f64,
    pub init: Init,
    pub restarts: usize,
}

impl CompressOptions {
    pub fn new(layers: usize) -> Self {
        Self {
            layers,
            chi: 256,
            max_sweeps: 500,
            inner_iters: 2,
            tol: 1e-10,
            init: Init::Random { seed: 0 },
            restarts: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompressResult {
    pub circuit: BrickWallCircuit,
    /// Cost `2 - 2 Re<target|circuit>` after every gate update.
    pub cost_trace: Vec<f64>,
    pub overlap: C64,
    pub infidelity: f64,
    pub sweeps: usize,
    /// Index of the restart that produced this result.
    pub restart: usize,
    /// Weight discarded while preparing the final circuit state.
    pub truncation: f64,
}

/// Sites of one layer grouped into gate pairs and uncovered single sites.
#[derive(Debug, Clone, Copy)]
enum Unit {
    Single(usize),
    Pair { gate: usize, site: usize },
}

fn units(n_qubits: usize, layer: usize) -> Vec<Unit> {
    let n = n_qubits / 2;
    let mut out = Vec::new();
    if layer.is_multiple_of(2) {
        out.push(Unit::Single(0));
    }
    for b in 1..=gate_count(n, layer) {
        out.push(Unit::Pair {
            gate: b - 1,
            site: gate_qubits(layer, b).0,
        });
    }
    if layer.is_multiple_of(2) {
        out.push(Unit::Single(n_qubits - 1));
    }
    out
}

fn slice(t: &SiteTensor, s: usize) -> CMat {
    CMat::from_fn(t.left, t.right, |a, b| t.get(a, s, b))
}

/// Two-site slices `A_p[s] A_q[t]`, indexed by `2 s + t`.
fn pair_slices(mps: &Mps, p: usize) -> Vec<CMat> {
    let (a, b) = (&mps.sites()[p], &mps.sites()[p + 1]);
    (0..4)
        .map(|x| slice(a, x / 2) * slice(b, x % 2))
        .collect()
}

fn left_step(env: &CMat, unit: Unit, r: &Mps, l: &Mps, gates: &[CMat]) -> CMat {
    match unit {
        Unit::Single(p) => transfer(env, &r.sites()[p], &l.sites()[p]),
        Unit::Pair { gate, site } => {
            let rr = pair_slices(r, site);
            let ll = pair_slices(l, site);
            let g = &gates[gate];
            let w: Vec<CMat> = ll.iter().map(|m| env * m).collect();
            let mut out = CMat::zeros(rr[0].ncols(), ll[0].ncols());
            for (x, rx) in rr.iter().enumerate() {
                let mut z = CMat::zeros(w[0].nrows(), w[0].ncols());
                for (y, wy) in w.iter().enumerate() {
                    if g[(x, y)] != linalg::ZERO {
                        z += wy * g[(x, y)];
                    }
                }
                out += rx.adjoint() * z;
            }
            out
        }
    }
}

fn right_step(env: &CMat, unit: Unit, r: &Mps, l: &Mps, gates: &[CMat]) -> CMat {
    match unit {
        Unit::Single(p) => {
            let (rt, lt) = (&r.sites()[p], &l.sites()[p]);
            let mut out = CMat::zeros(rt.left, lt.left);
            for s in 0..2 {
                out += slice(rt, s).conjugate() * env * slice(lt, s).transpose();
            }
            out
        }
        Unit::Pair { gate, site } => {
            let rr = pair_slices(r, site);
            let ll = pair_slices(l, site);
            let g = &gates[gate];
            let w: Vec<CMat> = ll.iter().map(|m| env * m.transpose()).collect();
            let mut out = CMat::zeros(rr[0].nrows(), ll[0].nrows());
            for (x, rx) in rr.iter().enumerate() {
                let mut z = CMat::zeros(w[0].nrows(), w[0].ncols());
                for (y, wy) in w.iter().enumerate() {
                    if g[(x, y)] != linalg::ZERO {
                        z += wy * g[(x, y)];
                    }
                }
                out += rx.conjugate() * z;
            }
            out
        }
    }
}

/// `E[x][y] = conj(d<R|U|L>/dU[x][y])` for the pair starting at `site`.
fn open_pair(left: &CMat, right: &CMat, r: &Mps, l: &Mps, site: usize) -> CMat {
    let rr = pair_slices(r, site);
    let ll = pair_slices(l, site);
    let w: Vec<CMat> = ll.iter().map(|m| left * m).collect();
    CMat::from_fn(4, 4, |x, y| {
        let m = rr[x].adjoint() * &w[y];
        m.component_mul(right).sum().conj()
    })
}

fn right_envs(r: &Mps, l: &Mps, units: &[Unit], gates: &[CMat]) -> Vec<CMat> {
    let mut envs = vec![CMat::from_element(1, 1, ONE); units.len() + 1];
    for k in (0..units.len()).rev() {
        envs[k] = right_step(&envs[k + 1], units[k], r, l, gates);
    }
    envs
}

fn check_pair(left: &Mps, right: &Mps, circuit: &BrickWallCircuit) -> Result<()> {
    if left.n_sites() != circuit.n_qubits() || right.n_sites() != circuit.n_qubits() {
        return Err(Error::Dimension(format!(
            "environment MPS sizes {} and {} for a {}-qubit circuit",
            left.n_sites(),
            right.n_sites(),
            circuit.n_qubits()
        )));
    }
    Ok(())
}

/// Environment of gate `gate` in layer `layer` (both 1-based): with
/// `left` the state before the layer and `right` the target pulled back
/// through the later layers, `Re<right|layer|left> = Re Tr[E† U]`.
pub fn environment(
    left: &Mps,
    right: &Mps,
    circuit: &BrickWallCircuit,
    layer: usize,
    gate: usize,
) -> Result<CMat> {
    check_pair(left, right, circuit)?;
    if layer == 0 || layer > circuit.n_layers() {
        return Err(Error::Invalid(format!("no layer {layer}")));
    }
    let gates = &circuit.layers()[layer - 1];
    if gate == 0 || gate > gates.len() {
        return Err(Error::Invalid(format!("layer {layer} has no gate {gate}")));
    }
    let us = units(circuit.n_qubits(), layer);
    let rights = right_envs(right, left, &us, gates);
    let mut env = CMat::from_element(1, 1, ONE);
    for (k, &u) in us.iter().enumerate() {
        if let Unit::Pair { gate: g, site } = u {
            if g + 1 == gate {
                return Ok(open_pair(&env, &rights[k + 1], right, left, site));
            }
        }
        env = left_step(&env, u, right, left, gates);
    }
    unreachable!("gate index checked above")
}

/// The unitary `U V†` from `env = U S V†`, which maximizes `Re Tr[env† U]`.
pub fn svd_update(env: &CMat) -> Result<CMat> {
    if env.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Invalid("environment has non-finite entries".into()));
    }
    let mut svd = linalg::svd_sorted(env);
    for k in 0..svd.s.len() {
        let col = svd.u.column(k);
        let (mut best, mut mag) = (0, -1.0);
        for (i, z) in col.iter().enumerate() {
            if z.norm() > mag + 1e-12 {
                best = i;
                mag = z.norm();
            }
        }
        let phase = C64::from_polar(1.0, -col[best].arg());
        for z in svd.u.column_mut(k).iter_mut() {
            *z *= phase;
        }
        for z in svd.v_t.row_mut(k).iter_mut() {
            *z *= phase.conj();
        }
    }
    Ok(&svd.u * &svd.v_t)
}

fn update_gate(env: &CMat, old: &CMat) -> Result<CMat> {
    let top = linalg::svd_sorted(env).s.first().copied().unwrap_or(0.0);
    if top < ZERO_ENV {
        return Ok(old.clone());
    }
    svd_update(env)
}

fn re_trace(env: &CMat, u: &CMat) -> f64 {
    env.iter().zip(u.iter()).map(|(e, g)| (e.conj() * g).re).sum()
}

/// Updates every gate of `layer` `inner_iters` times, appending the cost
/// after each update.
fn optimize_layer(
    circuit: &mut BrickWallCircuit,
    layer: usize,
    left: &Mps,
    right: &Mps,
    inner_iters: usize,
    trace: &mut Vec<f64>,
) -> Result<()> {
    let us = units(circuit.n_qubits(), layer);
    for _ in 0..inner_iters {
        let rights = right_envs(right, left, &us, &circuit.layers()[layer - 1]);
        let mut env = CMat::from_element(1, 1, ONE);
        for (k, &u) in us.iter().enumerate() {
            if let Unit::Pair { gate, site } = u {
                let e = open_pair(&env, &rights[k + 1], right, left, site);
                let gates = circuit.layer_mut(layer);
                let new = update_gate(&e, &gates[gate])?;
                trace.push(2.0 - 2.0 * re_trace(&e, &new));
                gates[gate] = new;
            }
            env = left_step(&env, u, right, left, &circuit.layers()[layer - 1]);
        }
    }
    Ok(())
}

struct Run {
    circuit: BrickWallCircuit,
    trace: Vec<f64>,
    sweeps: usize,
}

fn run(target: &Mps, mut circuit: BrickWallCircuit, opts: &CompressOptions) -> Result<Run> {
    let nl = circuit.n_layers();
    let chi = opts.chi;
    let mut trace = Vec::new();
    // rights[l-1]: target pulled back through layers L..l+1
    let mut rights = vec![target.clone(); nl];
    for l in (1..nl).rev() {
        let mut r = rights[l].clone();
        circuit.apply_layer(&mut r, l + 1, true, chi)?;
        rights[l - 1] = r;
    }
    let mut lefts = vec![Mps::vacuum(circuit.n_qubits()); nl];
    let mut previous = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let mut left = Mps::vacuum(circuit.n_qubits());
        for l in 1..=nl {
            optimize_layer(&mut circuit, l, &left, &rights[l - 1], opts.inner_iters, &mut trace)?;
            lefts[l - 1] = left.clone();
            circuit.apply_layer(&mut left, l, false, chi)?;
        }
        let mut right = target.clone();
        for l in (1..=nl).rev() {
            optimize_layer(&mut circuit, l, &lefts[l - 1], &right, opts.inner_iters, &mut trace)?;
            rights[l - 1] = right.clone();
            circuit.apply_layer(&mut right, l, true, chi)?;
        }
        let cost = trace.last().copied().unwrap_or(0.0);
        if (previous - cost).abs() < opts.tol {
            break;
        }
        previous = cost;
    }
    Ok(Run {
        circuit,
        trace,
        sweeps,
    })
}

/// Fits a brick-wall circuit acting on `|0...0>` to `target` by sweeping
/// SVD gate updates layer by layer; the best restart is returned.
pub fn compress(target: &Mps, opts: &CompressOptions) -> Result<CompressResult> {
    if opts.layers < 1 {
        return Err(Error::Invalid("at least one layer is required".into()));
    }
    if opts.chi < 1 {
        return Err(Error::Invalid("bond dimension must be at least 1".into()));
    }
    let n = target.n_sites();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "target must have an even number of qubits, got {n}"
        )));
    }
    let mut target = target.clone();
    target.canonicalize();
    let starts: Vec<BrickWallCircuit> = match opts.init {
        Init::Identity => vec![BrickWallCircuit::identity(n / 2, opts.layers)],
        Init::Random { seed } => (0..opts.restarts.max(1))
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
                BrickWallCircuit::random(n / 2, opts.layers, &mut rng)
            })
            .collect(),
    };
    let runs: Vec<Result<Run>> = std::thread::scope(|scope| {
        let handles: Vec<_> = starts
            .into_iter()
            .map(|c| {
                let target = &target;
                scope.spawn(move || run(target, c, opts))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("compression worker panicked"))
            .collect()
    });
    let mut best: Option<CompressResult> = None;
    for (restart, r) in runs.into_iter().enumerate() {
        let r = r?;
        let (state, truncation) = r.circuit.prepare(opts.chi)?;
        let overlap = target.overlap(&state)?;
        let candidate = CompressResult {
            infidelity: 1.0 - overlap.norm_sqr(),
            overlap,
            circuit: r.circuit,
            cost_trace: r.trace,
            sweeps: r.sweeps,
            restart,
            truncation,
        };
        if best
            .as_ref()
            .is_none_or(|b| candidate.infidelity < b.infidelity)
        {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// `1 - |<a|circuit|0>|^2` with the circuit state capped at bond `chi`;
/// also returns the discarded weight.
pub fn infidelity(a: &Mps, circuit: &BrickWallCircuit, chi: usize) -> Result<(f64, f64)> {
    if a.n_sites() != circuit.n_qubits() {
        return Err(Error::Dimension(format!(
            "MPS with {} sites against a {}-qubit circuit",
            a.n_sites(),
            circuit.n_qubits()
        )));
    }
    let (state, truncation) = circuit.prepare(chi)?;
    let o = a.overlap(&state)?;
    let na = a.norm();
    Ok((1.0 - o.norm_sqr() / (na * na), truncation))
}
