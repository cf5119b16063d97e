use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::{CliError, Config, Outcome, Resolver};
use crate::closed_forms::{
    check_derivative_bounds, verification_window, verify_subsolution, verify_supersolution, write_report_csv, Case,
    SuperSolutionSpec, VerificationPlan,
};
use crate::environment::{
    write_heatmap_pgm, write_rectangles_csv, Background, EnvParams, Environment, HeatmapError, Orientation, Plant,
    PlantSpec, Rectangle,
};
use crate::geometry::{quarter_turn, Point, Window};
use crate::hamiltonian::{check_assumptions, kinetic, rotate_gradient, HamiltonianParams};
use crate::probability::{self, EventQuery};
use crate::rng::SplitMix;
use crate::solver::{normalize_value, solve, write_probe_csv, write_snapshot_pgm, Boundary, SolverConfig, SolverRun};

const DEFAULT_OUT: &str = "hjlab-out";

/// Output directory plus the config hash stamped on every CSV.
struct Artifacts {
    dir: PathBuf,
    hash: String,
    files: Vec<PathBuf>,
    lines: Vec<String>,
}

impl Artifacts {
    fn create(config: &Config, resolved: &Config) -> Result<Self, CliError> {
        let dir = PathBuf::from(config.get("output.dir").unwrap_or(DEFAULT_OUT));
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let mut a = Self { dir, hash: resolved.hash(), files: Vec::new(), lines: Vec::new() };
        a.write("config.resolved", resolved.serialize().as_bytes())?;
        Ok(a)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn comment(&self) -> String {
        format!("config sha256={}", self.hash)
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.files.push(path.clone());
        Ok(path)
    }

    fn csv(&mut self, name: &str, body: impl FnOnce(&mut Vec<u8>, &str) -> io::Result<()>) -> Result<(), CliError> {
        let mut buf = Vec::new();
        let comment = self.comment();
        body(&mut buf, &comment).map_err(|e| CliError::io(&self.path(name), e))?;
        self.write(name, &buf)?;
        Ok(())
    }

    fn say(&mut self, line: String) {
        self.lines.push(line);
    }

    fn finish(mut self, passed: bool) -> Result<Outcome, CliError> {
        self.say(format!("result: {}", if passed { "PASS" } else { "FAIL" }));
        let mut text = format!("# {}\n", self.comment());
        for l in &self.lines {
            text.push_str(l);
            text.push('\n');
        }
        self.write("summary.txt", text.as_bytes())?;
        Ok(Outcome { passed, lines: self.lines, files: self.files })
    }
}

fn env_params(r: &Resolver<'_>) -> Result<EnvParams, CliError> {
    let d = EnvParams::default();
    Ok(EnvParams {
        lambda: r.parsed("env.lambda", d.lambda)?,
        mu: r.parsed("env.mu", d.mu)?,
        eta: r.parsed("env.eta", d.eta)?,
        q: r.parsed("env.q", d.q)?,
        delta: r.parsed("env.delta", d.delta)?,
        k_max: r.parsed("env.k_max", d.k_max)?,
        seed: r.parsed("env.seed", d.seed)?,
        env_grid_h: r.parsed("env.grid_h", d.env_grid_h)?,
    })
}

fn plants(r: &Resolver<'_>) -> Result<PlantSpec, CliError> {
    Ok(PlantSpec::new(r.list::<Plant>("env.plants", "")?))
}

fn background(r: &Resolver<'_>, default: &str) -> Result<Background, CliError> {
    match r.text("env.background", default).as_str() {
        "random" => Ok(Background::Random),
        "empty" => Ok(Background::Empty),
        other => Err(CliError::Config(format!("env.background must be random or empty, got {other:?}"))),
    }
}

fn solver_config(r: &Resolver<'_>, t_final: Option<f64>) -> Result<SolverConfig, CliError> {
    let t_final = match t_final {
        Some(t) => t,
        None => r.parsed("solver.t_final", 8.0)?,
    };
    let d = SolverConfig::for_horizon(t_final);
    let radius = match r.text("solver.radius", "auto").as_str() {
        "auto" => d.radius,
        raw => raw.parse().map_err(|e| CliError::Config(format!("solver.radius = {raw:?}: {e}")))?,
    };
    let boundary = r.text("solver.boundary", d.boundary.as_str()).parse::<Boundary>().map_err(CliError::Config)?;
    let config = SolverConfig {
        h: r.parsed("solver.h", d.h)?,
        cfl: r.parsed("solver.cfl", d.cfl)?,
        t_final,
        radius,
        radius_override: r.parsed("solver.radius_override", false)?,
        alpha: r.parsed("solver.alpha", d.alpha)?,
        boundary,
        probe: r.point("solver.probe", "0,0")?,
        grad_monitor_threshold: r.parsed("solver.grad_threshold", d.grad_monitor_threshold)?,
        ..d
    };
    config.validate()?;
    Ok(config)
}

/// Integer rectangle centre from a real pair.
fn lattice_center(x: Point, key: &str) -> Result<(i64, i64), CliError> {
    if x.iter().all(|v| v.fract() == 0.0 && v.abs() < 1e15) {
        Ok((x[0] as i64, x[1] as i64))
    } else {
        Err(CliError::Config(format!("{key} must be an integer pair, got {x:?}")))
    }
}

fn heatmap_error(path: &Path, e: HeatmapError) -> CliError {
    match e {
        HeatmapError::Env(e) => e.into(),
        HeatmapError::Io(e) => CliError::io(path, e),
    }
}

/// Writes the rectangle list, a heatmap of `c` and a metadata file.
pub fn cmd_env(config: &Config) -> Result<Outcome, CliError> {
    let r = Resolver::new(config);
    let params = env_params(&r)?;
    params.validate()?;
    let half = r.parsed("env.window", 64.0)?;
    let plants = plants(&r)?;
    let background = background(&r, "random")?;
    let mut out = Artifacts::create(config, &r.effective())?;

    let env = Environment::build(params, Window::centered_square(half), plants, background)?;
    out.csv("rectangles.csv", |w, c| write_rectangles_csv(&env, w, Some(c)))?;
    let heatmap = out.path("heatmap.pgm");
    write_heatmap_pgm(&env, &heatmap).map_err(|e| heatmap_error(&heatmap, e))?;
    out.files.push(heatmap);
    let meta = format!(
        "# {}\nseed = {}\nk_max = {}\nwindow = [-{half}, {half}]^2\nbackground = {:?}\nrectangles = {}\n\
         truncation_bound = {}\nc_error_bound = {}\n",
        out.comment(),
        params.seed,
        params.k_max,
        background,
        env.rectangles().len(),
        env.truncation_bound(),
        env.c_error_bound()
    );
    out.write("metadata.txt", meta.as_bytes())?;
    out.say(format!("rectangles: {}", env.rectangles().len()));
    out.say(format!("truncation bound (scales > {}): {:.3e}", params.k_max, env.truncation_bound()));
    out.say(format!("c evaluation error bound: {}", env.c_error_bound()));
    out.finish(true)
}

/// Stratified residual checks of `u⁺` and `u⁻` plus the derivative suite.
pub fn cmd_verify(config: &Config) -> Result<Outcome, CliError> {
    let r = Resolver::new(config);
    let mut params = env_params(&r)?;
    params.validate()?;
    let k: u32 = r.parsed("verify.k", 3)?;
    let center = r.point("verify.center", "0,0")?;
    let (l, m) = lattice_center(center, "verify.center")?;
    let plan = VerificationPlan {
        per_case: r.parsed("verify.per_case", 20_000)?,
        per_seam: r.parsed("verify.per_seam", 2_000)?,
        span: r.parsed("verify.span", 2.0)?,
        seed: r.parsed("verify.seed", 1)?,
    };
    let derivative_samples: usize = r.parsed("verify.derivative_samples", 100_000)?;
    let mut plant_list = plants(&r)?.entries;
    let background = background(&r, "empty")?;
    if plan.span < 1.0 {
        return Err(CliError::Config("verify.span must be at least 1".into()));
    }
    let mut out = Artifacts::create(config, &r.effective())?;

    params.k_max = params.k_max.max(k);
    let spec = SuperSolutionSpec::from_params(&params, center, k)?;
    plant_list.push(Plant::present(Orientation::Horizontal, k, l, m));
    let window = verification_window(&spec, plan.span, params.env_grid_h);
    let env = Environment::build(params, window, PlantSpec::new(plant_list), background)?;
    let planted = Rectangle::new(Orientation::Horizontal, k, (l, m), &params);
    if !env.is_complete(&planted) {
        return Err(CliError::Config(format!("the planted rectangle {planted:?} is not complete")));
    }

    let plus = verify_supersolution(&spec, &env, &plan)?;
    let rotated = env.rotate();
    let minus = verify_subsolution(&spec, &rotated, &plan)?;
    let deriv = check_derivative_bounds(&spec, derivative_samples, plan.seed);
    out.csv("verify_plus.csv", |w, c| write_report_csv(&plus, w, Some(c)))?;
    out.csv("verify_minus.csv", |w, c| write_report_csv(&minus, w, Some(c)))?;

    out.say(format!(
        "supersolution at X = ({l}, {m}), k = {k}, lambda = {}, mu = {}, eta = {}",
        params.lambda, params.mu, params.eta
    ));
    out.say(format!("tolerance (2 env_grid_h): {}", plus.tolerance));
    for (case, (count, margin)) in plus.per_case() {
        out.say(format!(
            "u+ case {}: {count} samples, bound {:.4}, min residual - bound = {margin:.4}",
            case.number(),
            spec.case_bound(case)
        ));
    }
    let weakest = Case::ALL.iter().map(|&c| spec.case_bound(c)).fold(f64::INFINITY, f64::min);
    out.say(format!("weakest case bound: {weakest:.4}"));
    out.say(format!("u+ min residual: {:.4}, violations: {}", plus.extreme_residual(), plus.violations().len()));
    out.say(format!("u- max residual: {:.4}, violations: {}", minus.extreme_residual(), minus.violations().len()));
    out.say(format!(
        "derivative bounds: {} samples, {} violations, max finite-difference gap {:.2e}, max |grad u+| {:.4}",
        deriv.samples,
        deriv.violations.len(),
        deriv.max_fd_error,
        deriv.max_grad_inf
    ));
    for v in deriv.violations.iter().take(5) {
        out.say(format!("  {v}"));
    }
    let passed = plus.passed() && minus.passed() && deriv.passed();
    out.finish(passed)
}

fn boundary_other(b: Boundary) -> Boundary {
    match b {
        Boundary::NeumannZero => Boundary::DirichletZero,
        Boundary::DirichletZero => Boundary::NeumannZero,
    }
}

fn run_on(env: &Environment, q: f64, config: SolverConfig) -> Result<SolverRun, CliError> {
    let hp = HamiltonianParams::new(q, env)?;
    Ok(solve(&hp, config)?)
}

/// Solves on the configured environment under both boundary modes.
pub fn cmd_solve(config: &Config) -> Result<Outcome, CliError> {
    let r = Resolver::new(config);
    let params = env_params(&r)?;
    params.validate()?;
    let plants = plants(&r)?;
    let background = background(&r, "random")?;
    let solver = solver_config(&r, None)?;
    let snapshot: bool = r.parsed("solver.snapshot", true)?;
    let refine: bool = r.parsed("solver.refine", false)?;
    let mut out = Artifacts::create(config, &r.effective())?;

    let window = Window::centered_square(solver.radius + solver.h + 2.0 * params.env_grid_h + 1.0);
    let env = Environment::build(params, window, plants, background)?;
    let primary = run_on(&env, params.q, solver)?;
    let other_mode = boundary_other(solver.boundary);
    let secondary = run_on(&env, params.q, SolverConfig { boundary: other_mode, ..solver })?;

    out.csv("probe.csv", |w, c| write_probe_csv(&primary, w, Some(c)))?;
    out.csv(&format!("probe_{}.csv", other_mode.as_str()), |w, c| write_probe_csv(&secondary, w, Some(c)))?;
    if snapshot {
        let path = out.path("field.pgm");
        let sidecar = write_snapshot_pgm(&primary.final_field, &path).map_err(|e| CliError::io(&path, e))?;
        out.files.push(path);
        out.files.push(sidecar);
    }

    out.say(format!(
        "steps = {}, dt = {:.6}, max |grad u| = {:.4}, monotone = {}",
        primary.steps,
        primary.dt,
        primary.max_grad_inf,
        primary.monotone()
    ));
    for w in primary.warnings.iter().chain(&secondary.warnings) {
        out.say(format!("warning: {w}"));
    }
    if let Some(&(t, u, _)) = primary.probe.last() {
        let u2 = secondary.value_at(t)?;
        out.say(format!("u({t}, probe)/{t} = {:.6} ({})", u / t, solver.boundary.as_str()));
        out.say(format!("u({t}, probe)/{t} = {:.6} ({})", u2 / t, other_mode.as_str()));
        let gap = (u - u2).abs() / t;
        out.say(format!(
            "boundary sensitivity {:.2e}{}",
            gap,
            if gap > 0.02 { " exceeds 0.02: both values reported above" } else { "" }
        ));
        if refine {
            let fine = run_on(&env, params.q, SolverConfig { h: 0.5 * solver.h, ..solver })?;
            let u3 = fine.value_at(t)?;
            out.say(format!("u({t}, probe)/{t} = {:.6} (h = {})", u3 / t, 0.5 * solver.h));
            out.say(format!("h-refinement sensitivity {:.2e}", (u - u3).abs() / t));
        }
    }
    out.finish(true)
}

/// `k` or `k@l:m`.
fn schedule_entry(raw: &str, orientation: Orientation) -> Result<(Orientation, u32, (i64, i64)), CliError> {
    let bad = || CliError::Config(format!("schedule entry {raw:?} is not `k` or `k@l:m`"));
    let (k, center) = match raw.split_once('@') {
        None => (raw, (0, 0)),
        Some((k, c)) => {
            let (l, m) = c.split_once(':').ok_or_else(bad)?;
            (k, (l.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
        }
    };
    let k: u32 = k.trim().parse().map_err(|_| bad())?;
    if !(1..=12).contains(&k) {
        return Err(CliError::Config(format!("scheduled scale {k} outside 1..=12")));
    }
    Ok((orientation, k, center))
}

/// For each scheduled rectangle, solves to `T_k` with the environment seen
/// from the rectangle's centre and records `u(T_k, 0)/T_k`.
pub fn cmd_demo_oscillation(config: &Config) -> Result<Outcome, CliError> {
    let r = Resolver::new(config);
    let mut params = env_params(&r)?;
    params.validate()?;
    let slack: f64 = r.parsed("demo.slack", 0.02)?;
    let mut schedule = Vec::new();
    for (key, o, default) in [
        ("demo.horizontal", Orientation::Horizontal, "1@0:0,3@0:300"),
        ("demo.vertical", Orientation::Vertical, "2@200:0,4@-600:0"),
    ] {
        for raw in r.list::<String>(key, default)? {
            schedule.push(schedule_entry(&raw, o)?);
        }
    }
    schedule.sort_by_key(|e| (e.1, e.0.index()));
    // solver keys other than the horizon apply to every run
    let base = solver_config(&r, Some(1.0))?;
    let mut out = Artifacts::create(config, &r.effective())?;

    params.k_max = schedule.iter().map(|e| e.1).max().unwrap_or(1).max(params.k_max);
    let rects: Vec<Rectangle> = schedule.iter().map(|&(o, k, c)| Rectangle::new(o, k, c, &params)).collect();
    for (i, a) in rects.iter().enumerate() {
        let crossing = rects
            .iter()
            .enumerate()
            .find(|(j, b)| *j != i && b.orientation() != a.orientation() && b.k() >= a.k() && b.intersects(a));
        if let Some((_, b)) = crossing {
            return Err(CliError::Config(format!(
                "scheduled {} rectangle k={} at {:?} is crossed by {} k={} at {:?}, so it is not complete",
                a.orientation(),
                a.k(),
                a.center(),
                b.orientation(),
                b.k(),
                b.center()
            )));
        }
    }

    let mut rows = Vec::new();
    let mut passed = true;
    for (i, &(o, k, (l, m))) in schedule.iter().enumerate() {
        let t = EnvParams::t_k(k);
        let solver = SolverConfig {
            t_final: t,
            radius: if base.radius_override { base.radius } else { SolverConfig::default_radius(t) },
            ..base
        };
        solver.validate()?;
        let shifted: Vec<Rectangle> = rects
            .iter()
            .map(|rc| Rectangle::new(rc.orientation(), rc.k(), (rc.center().0 - l, rc.center().1 - m), &params))
            .collect();
        let window = Window::centered_square(solver.radius + solver.h + 2.0 * params.env_grid_h + 1.0);
        let env = Environment::from_rectangles(params, window, shifted)?;
        let run = run_on(&env, params.q, solver)?;
        let value = normalize_value(&run, t)?;
        let (bound, ok) = match o {
            Orientation::Horizontal => (-0.5 + params.eta + slack, value <= -0.5 + params.eta + slack),
            Orientation::Vertical => (0.5 - params.eta - slack, value >= 0.5 - params.eta - slack),
        };
        passed &= ok;
        out.say(format!(
            "[{i}] {o} k={k} at ({l}, {m}): u({t},0)/{t} = {value:+.5} (bound {bound:+.3}) {} max|grad u| = {:.3}",
            if ok { "ok" } else { "VIOLATED" },
            run.max_grad_inf
        ));
        rows.push((k, o, t, value, bound, ok, run.max_grad_inf));
    }
    out.csv("demo.csv", |w, c| {
        writeln!(w, "# {c}")?;
        writeln!(w, "k,orientation,T,u_over_T,bound,within_bound,max_grad_inf")?;
        for (k, o, t, v, b, ok, g) in &rows {
            writeln!(w, "{k},{o},{t},{v},{b},{ok},{g}")?;
        }
        Ok(())
    })?;
    out.finish(passed)
}

/// Closed-form bounds and Monte Carlo frequencies of the rectangle events.
pub fn cmd_prob(config: &Config) -> Result<Outcome, CliError> {
    let r = Resolver::new(config);
    let ks: Vec<u32> = r.list("prob.k", "1,2,3,4")?;
    let delta: f64 = r.parsed("prob.delta", 0.5)?;
    let lambda: f64 = r.parsed("prob.lambda", 1.0)?;
    let mu: f64 = r.parsed("prob.mu", 1.0)?;
    let trials: u64 = r.parsed("prob.trials", 10_000)?;
    let margin: u32 = r.parsed("prob.margin", EventQuery::DEFAULT_MARGIN)?;
    let seed: u64 = r.parsed("prob.seed", 1)?;
    let mut queries = Vec::new();
    for &k in &ks {
        let params = EnvParams {
            lambda,
            mu,
            delta: delta.max(f64::MIN_POSITIVE),
            k_max: k + margin,
            seed,
            ..EnvParams::default()
        };
        let q = EventQuery { k, delta, params, trials, margin };
        q.validate()?;
        queries.push(q);
    }
    let mut out = Artifacts::create(config, &r.effective())?;

    let mut rows = Vec::new();
    let mut passed = true;
    for q in queries {
        let est = probability::mc_estimate(&q)?;
        let p_c = probability::p_ck_lower(q.k, q.delta);
        let p_d = probability::p_dk_given_ck_lower(q.k, &q.params);
        let bound = p_c * p_d;
        let one_sided = est.b_k.at_least(bound, 3.0);
        let exact_box = if p_c > 0.0 && p_c < 1.0 { est.c_box.agrees_with(p_c, 3.0) } else { est.c_box.value() == p_c };
        let nested = est.c_geometric.hits >= est.b_k.hits && est.b_k.hits >= est.c_and_d.hits;
        passed &= one_sided && exact_box && nested;
        out.say(format!(
            "k={}: P(C_k box) exact {p_c:.6}, MC {:.6} +- {:.6} {}; P(B_k) MC {:.6} +- {:.6} >= bound {bound:.3e} - 3 SE(bound): {}; \
             P(C_k geometric) MC {:.6}; P(C_k and D_k) MC {:.6}; nested: {nested}; truncation bound {:.2e}",
            q.k,
            est.c_box.value(),
            est.c_box.standard_error(),
            if exact_box { "ok" } else { "OUTSIDE 3 SE" },
            est.b_k.value(),
            est.b_k.standard_error(),
            one_sided,
            est.c_geometric.value(),
            est.c_and_d.value(),
            est.truncation_bound
        ));
        rows.push((q, est));
    }
    out.say(format!("p_ck_lower limit 1 - exp(-delta^2) = {:.6}", -(-delta * delta).exp_m1()));
    out.say(format!(
        "liminf lower bound (1 - exp(-delta^2)) exp(-2 lambda^2) = {:.6}",
        probability::liminf_lower(delta, lambda)
    ));
    out.csv("prob.csv", |w, c| probability::write_probability_csv(&rows, w, Some(c)))?;
    out.csv("prob_events.csv", |w, c| {
        writeln!(w, "# {c}")?;
        writeln!(w, "k,delta,event,trials,mc_freq,mc_se,closed_form")?;
        for (q, est) in &rows {
            let p_c = probability::p_ck_lower(q.k, q.delta);
            let p_d = probability::p_dk_given_ck_lower(q.k, &q.params);
            let events = [
                ("C_k_box", est.c_box, p_c.to_string()),
                ("C_k_geometric", est.c_geometric, String::new()),
                ("C_k_and_D_k", est.c_and_d, String::new()),
                ("B_k", est.b_k, (p_c * p_d).to_string()),
            ];
            for (name, f, cf) in events {
                writeln!(w, "{},{},{name},{},{},{},{cf}", q.k, q.delta, f.trials, f.value(), f.standard_error())?;
            }
        }
        Ok(())
    })?;
    out.finish(passed)
}

/// Structural checks of the Hamiltonian on a sampled environment.
pub fn cmd_assumptions(config: &Config) -> Result<Outcome, CliError> {
    let r = Resolver::new(config);
    let params = env_params(&r)?;
    params.validate()?;
    let half: f64 = r.parsed("env.window", 32.0)?;
    let plants = plants(&r)?;
    let background = background(&r, "random")?;
    let samples: usize = r.parsed("assumptions.samples", 720)?;
    let points: usize = r.parsed("assumptions.points", 256)?;
    if samples == 0 || points == 0 {
        return Err(CliError::Config("assumptions.samples and assumptions.points must be positive".into()));
    }
    let mut out = Artifacts::create(config, &r.effective())?;

    let env = Environment::build(params, Window::centered_square(half), plants, background)?;
    let hp = HamiltonianParams::new(params.q, &env)?;
    let area = env.evaluable();
    let mut rng = SplitMix::new(params.seed);
    let xs: Vec<Point> =
        (0..points).map(|_| [rng.uniform(area.min[0], area.max[0]), rng.uniform(area.min[1], area.max[1])]).collect();
    let report = check_assumptions(&hp, &xs, samples)?;

    let mut antisymmetry_failures = 0;
    let mut separation_failures = 0;
    for _ in 0..10_000 {
        let p = [rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)];
        if kinetic(rotate_gradient(p), params.q) != -kinetic(p, params.q) {
            antisymmetry_failures += 1;
        }
        let x = xs[(rng.next_u64() % xs.len() as u64) as usize];
        let y = quarter_turn(xs[(rng.next_u64() % xs.len() as u64) as usize]);
        if area.contains(y) {
            let a = hp.eval(p, x)? + env.c_value(x)?;
            let b = hp.eval(p, y)? + env.c_value(y)?;
            if (a - b).abs() > 1e-12 {
                separation_failures += 1;
            }
        }
    }

    out.csv("assumptions.csv", |w, c| {
        writeln!(w, "# {c}")?;
        writeln!(w, "radius,min_h_over_radius")?;
        for (radius, ratio) in &report.growth_ratios {
            writeln!(w, "{radius},{ratio}")?;
        }
        Ok(())
    })?;
    for (radius, ratio) in &report.growth_ratios {
        out.say(format!("min_(|p| = {radius}) H / R = {ratio:.6}"));
    }
    out.say(format!("superlinear growth: {}", report.superlinear));
    out.say(format!(
        "per-axis Lipschitz constants on |p|_inf <= 2: {:.12}, {:.12} (unit: {})",
        report.lipschitz_per_axis[0], report.lipschitz_per_axis[1], report.lipschitz_unit
    ));
    out.say(format!("antisymmetry failures on |p|_inf <= 2: {antisymmetry_failures} of 10000"));
    out.say(format!("separated-form failures: {separation_failures}"));
    for w in &report.witnesses {
        out.say(format!("witness: {w}"));
    }
    out.finish(report.passed() && antisymmetry_failures == 0 && separation_failures == 0)
}
