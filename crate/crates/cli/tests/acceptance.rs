//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use layers_cli::args::CapArgs;
use layers_cli::growth::growth;
use layers_core::{
    brute_force_is_extreme, build_chain_certificate, build_norm_certificate, is_extreme,
    layer_max_norm_sq, lower_bound, orbit_of, peel_orbits, peel_with, prec, upper_bound, Engine,
    ExtremenessQuery, Grid, LayerAssignment, Point, PointSet, SignedPermutation,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SMALL_GRID_POINTS: u64 = 10_000;
const LARGEST_PLANAR_SIDE: u64 = 401;

/// `(2n+1)^d <= 10^4` for `d <= 4`.
fn small_grids() -> Vec<Grid> {
    let mut out = Vec::new();
    for d in 1..=4u32 {
        let mut n = 0u64;
        while (2 * n + 1).pow(d) <= SMALL_GRID_POINTS {
            out.push(Grid::new(d as usize, n).unwrap());
            n += 1;
        }
    }
    out
}

/// Planar grids beyond the small ones, up to side 401.
fn large_planar_grids() -> Vec<Grid> {
    let first = small_grids().iter().filter(|g| g.dim() == 2).count() as u64;
    (first..=LARGEST_PLANAR_SIDE / 2)
        .map(|n| Grid::new(2, n).unwrap())
        .collect()
}

/// First failure of each grid-sweep criterion, if any.
#[derive(Default)]
struct SweepReport {
    sandwich_grids: usize,
    engine_grids: usize,
    sandwich: Option<String>,
    certificates: Option<String>,
    engines: Option<String>,
    largest: String,
}

fn note(slot: &mut Option<String>, result: Result<(), String>) {
    if let (None, Err(e)) = (&slot, result) {
        *slot = Some(e);
    }
}

fn check_sandwich(g: &Grid, a: &LayerAssignment) -> Result<(), String> {
    let l = BigInt::from(a.num_layers());
    let (lo, hi) = (
        lower_bound(g.dim(), g.radius()),
        upper_bound(g.dim(), g.radius()),
    );
    ensure(lo <= l && l <= hi, || {
        format!("{}: {lo} <= {l} <= {hi} fails", grid_name(g))
    })
}

fn check_certificates(g: &Grid, a: &LayerAssignment) -> Result<(), String> {
    let name = grid_name(g);
    let norm = build_norm_certificate(g, a).map_err(|e| format!("{name}: {e}"))?;
    let chain = build_chain_certificate(g, a).map_err(|e| format!("{name}: {e}"))?;
    norm.verify().map_err(|e| format!("{name} norm: {e}"))?;
    chain.verify().map_err(|e| format!("{name} chain: {e}"))?;
    let want = g.dim() * g.radius() as usize + 1;
    ensure(chain.len() == want, || {
        format!("{name}: chain length {} != {want}", chain.len())
    })?;
    ensure(
        chain.layer_indices().windows(2).all(|w| w[0] > w[1]),
        || format!("{name}: chain layers not strictly decreasing"),
    )?;
    norm.check_against(a)
        .map_err(|e| format!("{name} norm: {e}"))?;
    chain
        .check_against(a)
        .map_err(|e| format!("{name} chain: {e}"))
}

fn check_engines(g: &Grid, s: &PointSet, reference: &LayerAssignment) -> Result<(), String> {
    let name = grid_name(g);
    let orbit = peel_orbits(g).map_err(|e| e.to_string())?;
    ensure(orbit == *reference, || {
        format!("{name}: orbit differs from generic")
    })?;
    if g.dim() == 2 {
        let planar = peel_with(s, Engine::Planar).map_err(|e| e.to_string())?;
        ensure(planar == *reference, || {
            format!("{name}: 2d differs from generic")
        })?;
    }
    Ok(())
}

/// One pass over every grid of the sandwich criterion. Small grids are peeled
/// by every engine; the larger planar ones by the orbit engine.
fn sweep() -> &'static SweepReport {
    static SWEEP: OnceLock<SweepReport> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let mut r = SweepReport::default();
        let visit = |r: &mut SweepReport, g: &Grid, a: &LayerAssignment| {
            note(&mut r.sandwich, check_sandwich(g, a));
            note(&mut r.certificates, check_certificates(g, a));
            r.sandwich_grids += 1;
            r.largest = format!("L({}) = {}", grid_name(g), a.num_layers());
        };
        for g in small_grids() {
            let s = g.materialize().unwrap();
            let a = peel_with(&s, Engine::Generic).unwrap();
            note(&mut r.engines, check_engines(&g, &s, &a));
            r.engine_grids += 1;
            visit(&mut r, &g, &a);
        }
        for g in large_planar_grids() {
            visit(&mut r, &g, &peel_orbits(&g).unwrap());
        }
        r
    })
}

fn grid_name(g: &Grid) -> String {
    format!("[-{n},{n}]^{d}", n = g.radius(), d = g.dim())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn forced_equality() -> Outcome {
    let mut found = Vec::new();
    for d in 1..=5 {
        let s = Grid::new(d, 1).unwrap().materialize().unwrap();
        let l = peel_with(&s, Engine::Generic).unwrap().num_layers();
        ensure(l == d + 1, || {
            format!("L([-1,1]^{d}) = {l}, expected {}", d + 1)
        })?;
        found.push(l.to_string());
    }
    Ok(format!("L for d=1..5: {}", found.join(", ")))
}

fn sandwich() -> Outcome {
    let r = sweep();
    match &r.sandwich {
        Some(e) => Err(e.clone()),
        None => Ok(format!("{} grids, largest {}", r.sandwich_grids, r.largest)),
    }
}

fn orbit_set(reps: &[[i64; 2]]) -> BTreeSet<Point> {
    reps.iter()
        .flat_map(|r| orbit_of(&Point::from(*r)).images())
        .collect()
}

fn three_step_regression() -> Outcome {
    let g = Grid::new(2, 3).unwrap();
    let s = g.materialize().unwrap();
    for engine in [Engine::Auto, Engine::Generic, Engine::Planar, Engine::Orbit] {
        let a = peel_with(&s, engine).unwrap();
        let layer = |i: usize| a.layer(i).into_iter().cloned().collect::<BTreeSet<_>>();
        ensure(layer(3) == orbit_set(&[[1, 3]]), || {
            format!("{engine:?}: layer 3")
        })?;
        ensure(layer(4) == orbit_set(&[[0, 3], [2, 2]]), || {
            format!("{engine:?}: layer 4")
        })?;
        ensure(layer(5) == orbit_set(&[[1, 2]]), || {
            format!("{engine:?}: layer 5")
        })?;
        let radii = layer_max_norm_sq(&a);
        let want: Vec<BigInt> = [10, 9, 5].into_iter().map(BigInt::from).collect();
        ensure(radii[2..5] == want[..], || {
            format!("{engine:?}: radii {:?}", &radii[2..5])
        })?;
    }
    Ok("layers 3, 4, 5 are the expected orbits with max norm^2 10, 9, 5".into())
}

fn certificates() -> Outcome {
    let r = sweep();
    match &r.certificates {
        Some(e) => Err(e.clone()),
        None => Ok(format!(
            "{} grids, both certificates valid",
            r.sandwich_grids
        )),
    }
}

fn random_set(rng: &mut ChaCha8Rng) -> PointSet {
    let d = rng.gen_range(1..=4);
    let count = rng.gen_range(1..=30);
    let reach = if rng.gen_bool(0.5) { 3 } else { 1000 };
    let points = (0..count).map(|_| {
        let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-reach..=reach)).collect();
        Point::from_i64s(&c)
    });
    PointSet::new(d, points).unwrap()
}

fn agree(q: &ExtremenessQuery) -> Result<bool, String> {
    let fast = is_extreme(q);
    let slow = brute_force_is_extreme(q, 64).map_err(|e| e.to_string())?;
    if let Some(w) = fast.witness() {
        ensure(w.verify_within(q.ambient()), || {
            format!("bad witness for {}", q.subject())
        })?;
    }
    ensure(fast.is_extreme() == slow, || {
        format!(
            "{} in a set of {}: LP says {}, oracle says {slow}",
            q.subject(),
            q.ambient().len(),
            fast.is_extreme()
        )
    })?;
    Ok(slow)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7e5);
    let mut extreme = 0;
    for _ in 0..1000 {
        let s = random_set(&mut rng);
        let subject = s.points()[rng.gen_range(0..s.len())].clone();
        extreme += agree(&ExtremenessQuery::new(subject, s).unwrap())? as usize;
    }
    let cube = Grid::new(3, 1).unwrap().materialize().unwrap();
    let a = peel_with(&cube, Engine::Generic).unwrap();
    let mut exhaustive = 0;
    for i in 1..=a.num_layers() {
        let c = a.remaining_at(i);
        for p in c.iter() {
            let on_layer = agree(&ExtremenessQuery::new(p.clone(), c.clone()).unwrap())?;
            ensure(on_layer == (a.layer_of(p) == Some(i)), || {
                format!("{p} in C_{i}: extreme = {on_layer}")
            })?;
            exhaustive += 1;
        }
    }
    Ok(format!(
        "1000 random queries ({extreme} extreme), {exhaustive} queries on [-1,1]^3 intermediates"
    ))
}

fn engine_equivalence() -> Outcome {
    let r = sweep();
    match &r.engines {
        Some(e) => Err(e.clone()),
        None => Ok(format!("{} grids", r.engine_grids)),
    }
}

fn prec_ordering() -> Outcome {
    let mut pairs = 0;
    for (d, n) in [(2, 3), (3, 1)] {
        let s = Grid::new(d, n).unwrap().materialize().unwrap();
        let a = peel_with(&s, Engine::Generic).unwrap();
        for x in s.iter() {
            for y in s.iter().filter(|y| prec(x, y)) {
                ensure(a.layer_of(x) > a.layer_of(y), || {
                    format!(
                        "{x} ≺ {y} but layers {:?}, {:?}",
                        a.layer_of(x),
                        a.layer_of(y)
                    )
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn growth_exponent() -> Outcome {
    let report = growth(
        &[51, 101, 201, 401],
        Engine::Planar,
        CapArgs { cap: 1 << 20 },
    )
    .map_err(|e| e.to_string())?;
    let layers: Vec<String> = report.rows.iter().map(|r| r.1.to_string()).collect();
    let detail = format!("slope {:.4}, L = {}", report.slope, layers.join(", "));
    ensure((1.18..=1.48).contains(&report.slope), || detail.clone())?;
    Ok(detail)
}

fn equivariance() -> Outcome {
    let mut checks = 0;
    for (d, n) in [(2, 3), (4, 1)] {
        let s = Grid::new(d, n).unwrap().materialize().unwrap();
        let a = peel_with(&s, Engine::Generic).unwrap();
        for g in SignedPermutation::all(d) {
            for x in s.iter() {
                let gx = g.apply(x);
                ensure(a.layer_of(&gx) == a.layer_of(x), || {
                    format!("layer of {gx} differs from layer of {x}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (g, x) pairs"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("forced equality at n = 1", forced_equality),
        ("sandwich bounds", sandwich),
        ("peeling steps 3 to 5 on [-3,3]^2", three_step_regression),
        ("certificate soundness", certificates),
        ("oracle equivalence", oracle_equivalence),
        ("engine equivalence", engine_equivalence),
        ("prec ordering", prec_ordering),
        ("2D growth exponent", growth_exponent),
        ("symmetry equivariance", equivariance),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
