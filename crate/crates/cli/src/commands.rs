use crate::cache::{Cache, Lookup};
use crate::output::write_json;
use crate::{CliError, Command, ParityArg};
use maass_core::jacobi::{assemble_jacobi, theta_decompose, theta_decompose_all, JacobiBundle, JacobiFormData};
use maass_core::maass::{hejhal_solve, CoefficientTable, EigenvalueRecord, FourierExpansion, HejhalConfig, Parity};
use maass_core::multipliers::{rho_am, UnitaryRep};
use maass_core::periods::{period_transform, PeriodConfig};
use maass_core::transferop::{critical_line, det_scan, GridSpec, OperatorKind};
use maass_core::{c64, C64};
use maass_verify::{chi12_jacobi_data, theta_checks, Check, Suite};
use serde::{Deserialize, Serialize};
use std::path::Path;

type Outcome = Result<bool, CliError>;

pub(crate) fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Scan { k, rep, window, steps, degree, out } => scan(k, &rep, &window, steps, degree, &out),
        Command::SolveMaass { window, parity, cache_dir, out } => solve_maass(&window, parity, &cache_dir, out.as_deref()),
        Command::Period { from_cache, window, parity, cache_dir, out, certificate } => {
            period(from_cache, window, parity, &cache_dir, &out, &certificate)
        }
        Command::Verify { suite, out } => verify(&suite, &out),
        Command::ThetaCheck { m, out } => theta_check(&m, &out),
        Command::JacobiDecompose { bundle, from_form, bundle_out, tau, cache_dir, out } => {
            jacobi_decompose(bundle.as_deref(), from_form.as_deref(), &bundle_out, &tau, &cache_dir, &out)
        }
    }
}

/// `lo:hi` with `lo < hi`.
pub fn parse_window(w: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("window '{w}' must look like lo:hi with lo < hi"));
    let (a, b) = w.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// `re,im`.
pub fn parse_complex(v: &str) -> Result<C64, CliError> {
    let bad = || CliError::Usage(format!("'{v}' must look like re,im"));
    let (a, b) = v.split_once(',').ok_or_else(bad)?;
    Ok(c64(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// `trivial`, or `A,M` (optionally prefixed `rho:`) for rho_{A,M}.
pub fn parse_rep(v: &str) -> Result<UnitaryRep, CliError> {
    if v == "trivial" {
        return Ok(UnitaryRep::trivial(1));
    }
    let bad = || CliError::Usage(format!("representation '{v}' must be 'trivial' or 'A,M'"));
    let (a, m) = v.trim_start_matches("rho:").split_once(',').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let m: u32 = m.trim().parse().map_err(|_| bad())?;
    if m == 0 {
        return Err(bad());
    }
    rho_am(a, m).map_err(|e| CliError::Usage(e.to_string()))
}

/// Parameter domain of the period correspondence: `0 < Re s < 1` and `s != +-k/2 mod 1`.
pub fn check_domain(s: C64, k: f64) -> Result<(), CliError> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(CliError::Usage(format!("s = {s} must satisfy 0 < Re s < 1")));
    }
    for sign in [1.0, -1.0] {
        let d = s - sign * k / 2.0;
        if d.im.abs() < 1e-12 && (d.re - d.re.round()).abs() < 1e-12 {
            return Err(CliError::Usage(format!("s = {s} is congruent to {}k/2 mod 1 for k = {k}", if sign > 0.0 { "+" } else { "-" })));
        }
    }
    Ok(())
}

fn report(checks: &[Check]) -> bool {
    for c in checks {
        println!("{} {}: residual {:.3e}, tolerance {:.1e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.residual, c.tolerance);
    }
    checks.iter().all(|c| c.pass)
}

#[derive(Serialize)]
struct ZeroOut {
    s_re: f64,
    s_im: f64,
    residual: f64,
}

#[derive(Serialize)]
struct ZerosFile {
    zeros: Vec<ZeroOut>,
}

fn scan(k: f64, rep: &str, window: &str, steps: Option<usize>, degree: usize, out: &Path) -> Outcome {
    let (t0, t1) = parse_window(window)?;
    let rep = parse_rep(rep)?;
    if degree < 4 {
        return Err(CliError::Usage("degree must be at least 4".into()));
    }
    let steps = steps.unwrap_or(((t1 - t0) / 0.2).ceil() as usize).max(2);
    let path = critical_line(t0, t1, steps);
    for &s in &path {
        check_domain(s, k)?;
    }
    let res = det_scan(OperatorKind::Induced, k, &rep, &path, GridSpec { degree })?;
    let zeros: Vec<ZeroOut> = res.zeros.iter().map(|z| ZeroOut { s_re: z.s.re, s_im: z.s.im, residual: z.residual }).collect();
    for z in &zeros {
        println!("zero at s = {:.16e} + {:.16e} i", z.s_re, z.s_im);
    }
    write_json(out, &ZerosFile { zeros })?;
    Ok(true)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct SolveRequest {
    kind: String,
    window: (f64, f64),
    parity: Parity,
    n: usize,
    y0: f64,
    y1: f64,
    q: usize,
    scan_step: f64,
    tol: f64,
}

impl SolveRequest {
    fn new(window: (f64, f64), parity: Parity) -> Self {
        let c = HejhalConfig::default();
        Self { kind: "hejhal".into(), window, parity, n: c.n, y0: c.y0, y1: c.y1, q: c.q, scan_step: c.scan_step, tol: c.tol }
    }

    fn solve(&self) -> Result<CachedForm, CliError> {
        let cfg = HejhalConfig { n: self.n, y0: self.y0, y1: self.y1, q: self.q, scan_step: self.scan_step, tol: self.tol };
        let rec = hejhal_solve(self.window, self.parity, &cfg)?;
        Ok(CachedForm { r: rec.r, residual: rec.residual, table: rec.expansion.to_table() })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CachedForm {
    r: f64,
    residual: f64,
    table: CoefficientTable,
}

impl CachedForm {
    fn record(&self) -> Result<EigenvalueRecord, CliError> {
        let expansion = FourierExpansion::from_table(&self.table)?;
        let parity = expansion.parity.ok_or_else(|| CliError::Failure("cached form has no parity".into()))?;
        Ok(EigenvalueRecord { r: self.r, s: expansion.s, parity, expansion, residual: self.residual })
    }
}

fn parity(p: ParityArg) -> Parity {
    match p {
        ParityArg::Even => Parity::Even,
        ParityArg::Odd => Parity::Odd,
    }
}

/// Cached form for `req`, recomputed when missing or corrupted.
fn form_for_request(cache: &Cache, req: &SolveRequest) -> Result<(String, CachedForm), CliError> {
    let id = crate::cache::content_hash(req);
    match cache.load::<SolveRequest, CachedForm>(&id) {
        Lookup::Hit(form) => return Ok((id, form)),
        Lookup::Corrupt { reason, .. } => eprintln!("warning: cache entry {id} rejected ({reason}); recomputing"),
        Lookup::Missing => {}
    }
    let form = req.solve()?;
    let id = cache.store(req, &form)?;
    Ok((id, form))
}

fn form_from_cache(cache: &Cache, id: &str) -> Result<CachedForm, CliError> {
    match cache.load::<SolveRequest, CachedForm>(id) {
        Lookup::Hit(form) => Ok(form),
        Lookup::Missing => Err(CliError::Failure(format!("no cache entry {id} in {}", cache.path(id).display()))),
        Lookup::Corrupt { request: Some(req), reason } => {
            eprintln!("warning: cache entry {id} rejected ({reason}); recomputing");
            let form = req.solve()?;
            cache.store(&req, &form)?;
            Ok(form)
        }
        Lookup::Corrupt { request: None, reason } => {
            Err(CliError::Failure(format!("cache entry {id} is corrupted ({reason}) and cannot be recomputed")))
        }
    }
}

#[derive(Serialize)]
struct FormSummary {
    form_id: String,
    r: f64,
    residual: f64,
    parity: Parity,
}

fn solve_maass(window: &str, p: ParityArg, cache_dir: &Path, out: Option<&Path>) -> Outcome {
    let window = parse_window(window)?;
    if window.0 <= 0.0 {
        return Err(CliError::Usage("the spectral window must lie in r > 0".into()));
    }
    let req = SolveRequest::new(window, parity(p));
    let (id, form) = form_for_request(&Cache::new(cache_dir), &req)?;
    println!("{id}");
    eprintln!("r = {:.16e}, residual {:.3e}", form.r, form.residual);
    if let Some(out) = out {
        write_json(out, &FormSummary { form_id: id, r: form.r, residual: form.residual, parity: req.parity })?;
    }
    Ok(true)
}

fn period(
    from_cache: Option<String>,
    window: Option<String>,
    p: Option<ParityArg>,
    cache_dir: &Path,
    out: &Path,
    certificate: &Path,
) -> Outcome {
    let cache = Cache::new(cache_dir);
    let form = match (from_cache, window, p) {
        (Some(id), _, _) => form_from_cache(&cache, &id)?,
        (None, Some(w), Some(p)) => form_for_request(&cache, &SolveRequest::new(parse_window(&w)?, parity(p)))?.1,
        _ => return Err(CliError::Usage("period needs --from-cache ID or --window with --parity".into())),
    };
    let rec = form.record()?;
    let u = &rec.expansion;
    check_domain(u.s, u.k)?;
    let rep = UnitaryRep::from_descriptor(u.rep)?;
    let pf = period_transform(u, &rep, &PeriodConfig::default())?;
    std::fs::write(out, pf.to_csv())?;
    let ts: Vec<f64> = (0..40).map(|j| 10f64.powf(-2.0 + 4.0 * j as f64 / 39.0)).collect();
    let measured = |name: &str, tol: f64, r: maass_core::Result<f64>| match r {
        Ok(v) => Check::below(name, v, tol),
        Err(e) => Check::failed(name, e),
    };
    let checks = vec![
        measured("three-term relation", 1e-6, pf.three_term_residual(&ts)),
        measured("S-antisymmetry", 1e-6, pf.antisymmetry_residual(&ts)),
        Check::below("limit relation", pf.limit_residual(), 1e-6),
        measured("fast transfer operator fixed point", 1e-5, pf.fast_fixed_point_residual(&ts[..12])),
        Check::below("quadrature error", pf.quadrature_error, 1e-8),
    ];
    write_json(certificate, &checks)?;
    Ok(report(&checks))
}

fn verify(suite: &str, out: &Path) -> Outcome {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(CliError::Usage)?]
    };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(s.run().into_iter().map(|mut c| {
            c.name = format!("{s}: {}", c.name);
            c
        }));
    }
    write_json(out, &checks)?;
    Ok(report(&checks))
}

fn theta_check(ms: &[u32], out: &Path) -> Outcome {
    if ms.is_empty() || ms.contains(&0) {
        return Err(CliError::Usage("theta indices must be positive".into()));
    }
    let checks: Vec<Check> = ms.iter().flat_map(|&m| theta_checks(m)).collect();
    write_json(out, &checks)?;
    Ok(report(&checks))
}

#[derive(Serialize)]
struct ComponentOut {
    j: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct Decomposition {
    m: u32,
    k: f64,
    a: i64,
    s_re: f64,
    s_im: f64,
    tau_re: f64,
    tau_im: f64,
    components: Vec<ComponentOut>,
    checks: Vec<Check>,
}

fn jacobi_decompose(
    bundle: Option<&Path>,
    from_form: Option<&str>,
    bundle_out: &Path,
    tau: &str,
    cache_dir: &Path,
    out: &Path,
) -> Outcome {
    let tau = parse_complex(tau)?;
    if !(tau.im > 0.0) {
        return Err(CliError::Usage("tau must lie in the upper half-plane".into()));
    }
    let cache = Cache::new(cache_dir);
    let data = match (bundle, from_form) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            let b: JacobiBundle = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad bundle: {e}")))?;
            let table = match cache.load::<(), CoefficientTable>(&b.table_sha256) {
                Lookup::Hit(t) => t,
                Lookup::Missing => return Err(CliError::Failure(format!("coefficient table {} not cached", b.table_sha256))),
                Lookup::Corrupt { reason, .. } => {
                    return Err(CliError::Failure(format!("coefficient table {} is corrupted ({reason})", b.table_sha256)))
                }
            };
            JacobiFormData::from_bundle(&b, FourierExpansion::from_table(&table)?)?
        }
        (None, Some(id)) => {
            let rec = form_from_cache(&cache, id)?.record()?;
            if rec.parity != Parity::Odd {
                return Err(CliError::Usage("index-6 data needs an odd form".into()));
            }
            let data = chi12_jacobi_data(&rec)?;
            let table_id = cache.store_content(&data.components.to_table())?;
            write_json(bundle_out, &data.to_bundle(table_id))?;
            data
        }
        (None, None) => return Err(CliError::Usage("jacobi-decompose needs --bundle or --from-form".into())),
    };
    let f = |t: C64, z: C64| assemble_jacobi(&data, t, z);
    let parts = theta_decompose_all(f, data.m, tau)?;
    let direct = data.component_values(tau)?;
    let size = direct.iter().fold(1.0f64, |m, v| m.max(v.norm()));
    let roundtrip = parts.iter().zip(&direct).fold(0.0f64, |m, (a, b)| m.max((a - b).norm())) / size;
    let mut class = 0.0f64;
    for j in 1..=2 * data.m as i64 {
        let shifted = theta_decompose(f, data.m, j + 2 * data.m as i64, tau)?.f_j;
        class = class.max((shifted - parts[j as usize - 1]).norm() / size);
    }
    let checks = vec![
        Check::below("decomposition recovers the components (relative)", roundtrip, 1e-9),
        Check::below("components depend only on j mod 2m (relative)", class, 1e-10),
    ];
    let components = parts.iter().enumerate().map(|(i, v)| ComponentOut { j: i + 1, re: v.re, im: v.im }).collect();
    write_json(
        out,
        &Decomposition {
            m: data.m,
            k: data.k,
            a: data.a,
            s_re: data.s.re,
            s_im: data.s.im,
            tau_re: tau.re,
            tau_im: tau.im,
            components,
            checks: checks.clone(),
        },
    )?;
    Ok(report(&checks))
}
