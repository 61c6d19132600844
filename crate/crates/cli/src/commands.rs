use std::path::PathBuf;

use polyzeros::curvetrace::{dominance_map, trace_curve, BBox, DominanceClass, DominanceOptions, Grid};
use polyzeros::examples::example;
use polyzeros::output::{curve_csv, curve_svg, dominance_csv, report_csv, sequence_csv, sequence_text, zeros_csv};
use polyzeros::par::{set_thread_count, Exec};
use polyzeros::polyparse::parse;
use polyzeros::recurrence::{sequence_generate, zeros_of, RecurrenceSpec, SequenceWindow};
use polyzeros::rootfind::{RootOptions, RootSet};
use polyzeros::verify::{
    qdisc_row, reproduce_figure, verify_qdisc_consistency, verify_quotients, verify_zeros_on_curve, FigureOptions,
    RowOrigin, VerificationReport, VerifyOptions,
};
use polyzeros::C64;
use serde::Serialize;

use crate::opts::{parse_grid, parse_indices, Format, Opts};
use crate::{Failure, Status};

const REFINE_TOL: f64 = 1e-12;
const DEFAULT_WINDOW: f64 = 5.0;

/// Writes each output to `--out DIR`, or to standard output without one.
struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    fn new(o: &Opts) -> Result<Sink, Failure> {
        if let Some(d) = &o.out {
            std::fs::create_dir_all(d).map_err(|e| Failure::Io(d.clone(), e))?;
        }
        Ok(Sink { dir: o.out.clone() })
    }

    fn to_stdout(&self) -> bool {
        self.dir.is_none()
    }

    fn emit(&self, name: &str, body: &str) -> Result<(), Failure> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                std::fs::write(&path, body).map_err(|e| Failure::Io(path.clone(), e))
            }
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn exec(o: &Opts) -> Result<Exec, Failure> {
    match o.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        Some(n) => {
            set_thread_count(n);
            Ok(Exec::Parallel)
        }
        None => Ok(Exec::Parallel),
    }
}

fn spec(o: &Opts) -> Result<RecurrenceSpec, Failure> {
    let base = o.example.as_deref().map(example).transpose()?;
    let missing = |what: &str| Failure::Usage(format!("missing --{what} (or --example)"));
    let k = o.k.or(base.map(|e| e.k)).ok_or_else(|| missing("k"))?;
    let l = o.l.or(base.map(|e| e.l)).ok_or_else(|| missing("l"))?;
    let a = o.a.as_deref().or(base.map(|e| e.a)).ok_or_else(|| missing("A"))?;
    let b = o.b.as_deref().or(base.map(|e| e.b)).ok_or_else(|| missing("B"))?;
    Ok(RecurrenceSpec::parse(k, l, a, b)?)
}

fn indices(o: &Opts) -> Result<Vec<usize>, Failure> {
    match &o.n {
        Some(t) => parse_indices(t),
        None => match o.example.as_deref().map(example).transpose()? {
            Some(e) => Ok(e.indices.to_vec()),
            None => Err(Failure::Usage("missing --n".into())),
        },
    }
}

fn window(o: &Opts, half_width: f64) -> Result<BBox, Failure> {
    match &o.bbox {
        Some(t) => Ok(t.parse()?),
        None => Ok(BBox::square(half_width)?),
    }
}

fn grid(o: &Opts, bbox: BBox, default: usize) -> Result<Grid, Failure> {
    let (nx, ny) = match &o.grid {
        Some(t) => parse_grid(t)?,
        None => (default, default),
    };
    Ok(Grid::new(bbox, nx, ny)?)
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    Failure::Usage(format!("{cmd} does not produce {f} output"))
}

fn verify_options(o: &Opts, exec: Exec) -> VerifyOptions {
    let d = VerifyOptions::default();
    VerifyOptions { tol: o.tol.unwrap_or(d.tol), ab_eps: o.ab_eps.unwrap_or(d.ab_eps), seed: o.seed, exec, ..d }
}

fn zeros_at(w: &SequenceWindow, n: usize) -> Result<RootSet, Failure> {
    Ok(zeros_of(w, n, &RootOptions::default())?)
}

pub fn seq(o: &Opts) -> Result<Status, Failure> {
    let spec = spec(o)?;
    let n = *indices(o)?.iter().max().expect("nonempty");
    let w = sequence_generate(&spec, n);
    let sink = Sink::new(o)?;
    if sink.to_stdout() && o.format.is_empty() {
        sink.emit("", &sequence_text(&w))?;
        return Ok(Status::Clean);
    }
    for f in o.formats_or(&[Format::Csv]) {
        match f {
            Format::Csv => sink.emit("seq.csv", &sequence_csv(&w))?,
            Format::Json => sink.emit("seq.json", &json(&w))?,
            Format::Svg => return Err(unsupported("seq", f)),
        }
    }
    Ok(Status::Clean)
}

pub fn zeros(o: &Opts) -> Result<Status, Failure> {
    let spec = spec(o)?;
    let ns = indices(o)?;
    let exec = exec(o)?;
    let w = sequence_generate(&spec, *ns.iter().max().expect("nonempty"));
    let sink = Sink::new(o)?;
    let mut status = Status::Clean;
    for &n in &ns {
        let rs = zeros_at(&w, n)?;
        if !rs.is_certified() {
            status = status.max(Status::NonCertified);
        }
        eprintln!("n={n}: {} zeros, max residual {:.1e}{}", rs.len(), rs.max_residual(), if rs.is_certified() { "" } else { " (not certified)" });
        for f in o.formats_or(&[Format::Csv]) {
            let name = format!("zeros_n{n}.{}", f.ext());
            match f {
                Format::Csv => sink.emit(&name, &zeros_csv(&rs))?,
                Format::Json => sink.emit(&name, &json(&rs))?,
                Format::Svg => {
                    let bbox = match &o.bbox {
                        Some(t) => t.parse()?,
                        None => BBox::around(rs.roots(), 0.15, 1.0)?,
                    };
                    let net = trace_curve(&spec, &grid(o, bbox, 300)?, REFINE_TOL, exec)?;
                    sink.emit(&name, &curve_svg(&net, Some(rs.roots()), &format!("zeros of P_{n}")))?;
                }
            }
        }
    }
    Ok(status)
}

pub fn curve(o: &Opts) -> Result<Status, Failure> {
    let spec = spec(o)?;
    let g = grid(o, window(o, DEFAULT_WINDOW)?, 300)?;
    let net = trace_curve(&spec, &g, REFINE_TOL, exec(o)?)?;
    eprintln!("{} polylines, {} vertices, {} guarded cells", net.polylines.len(), net.vertices().count(), net.guarded_cells);
    let sink = Sink::new(o)?;
    let default: &[Format] = if sink.to_stdout() { &[Format::Csv] } else { &[Format::Csv, Format::Svg] };
    for f in o.formats_or(default) {
        match f {
            Format::Csv => sink.emit("curve.csv", &curve_csv(&net))?,
            Format::Svg => sink.emit("curve.svg", &curve_svg(&net, None, "Im(B^k/A^l) = 0"))?,
            Format::Json => sink.emit("curve.json", &json(&net))?,
        }
    }
    Ok(Status::Clean)
}

pub fn dominance(o: &Opts) -> Result<Status, Failure> {
    let spec = spec(o)?;
    let g = grid(o, window(o, DEFAULT_WINDOW)?, 200)?;
    let d = DominanceOptions::default();
    let opts = DominanceOptions { equimodular_tol: o.tol.unwrap_or(d.equimodular_tol), exec: exec(o)?, ..d };
    let field = dominance_map(&spec, &g, &opts)?;
    eprintln!(
        "{} nodes: {} unique dominant, {} equimodular, {} near-degenerate, {} uncertified",
        field.nodes.len(),
        field.count(DominanceClass::UniqueDominant),
        field.count(DominanceClass::EquimodularSmallestPair),
        field.count(DominanceClass::NearDegenerateDiscriminant),
        field.uncertified()
    );
    let sink = Sink::new(o)?;
    for f in o.formats_or(&[Format::Csv]) {
        match f {
            Format::Csv => sink.emit("dominance.csv", &dominance_csv(&field))?,
            Format::Json => sink.emit("dominance.json", &json(&field))?,
            Format::Svg => return Err(unsupported("dominance", f)),
        }
    }
    Ok(if field.uncertified() > 0 { Status::NonCertified } else { Status::Clean })
}

fn summarize(r: &VerificationReport) {
    let a = &r.aggregates;
    eprintln!(
        "n={}: {} passing, {} failing, {} filtered of {} zeros; max |sin arg w| {:.1e}; theorem violations {}, conjecture candidates {}{}",
        r.n,
        a.passing,
        a.failing,
        a.filtered,
        a.degree,
        a.max_im_defect,
        a.theorem_violations,
        a.conjecture_candidates,
        if a.certified { "" } else { "; not certified" }
    );
}

fn emit_reports(
    o: &Opts,
    stem: &str,
    run: impl Fn(usize) -> polyzeros::Result<VerificationReport>,
    violations_fail: bool,
) -> Result<Status, Failure> {
    let sink = Sink::new(o)?;
    let mut status = Status::Clean;
    for n in indices(o)? {
        let r = run(n)?;
        summarize(&r);
        if !r.aggregates.certified {
            status = status.max(Status::NonCertified);
        }
        if violations_fail && r.aggregates.theorem_violations > 0 {
            status = status.max(Status::Violation);
        }
        for f in o.formats_or(&[Format::Json]) {
            let name = format!("{stem}_n{n}.{}", f.ext());
            match f {
                Format::Json => sink.emit(&name, &r.to_json())?,
                Format::Csv => sink.emit(&name, &report_csv(&r))?,
                Format::Svg => return Err(unsupported(stem, f)),
            }
        }
    }
    Ok(status)
}

pub fn verify(o: &Opts) -> Result<Status, Failure> {
    let spec = spec(o)?;
    let opts = verify_options(o, exec(o)?);
    emit_reports(o, "verify", |n| verify_zeros_on_curve(&spec, n, &opts), true)
}

pub fn quotients(o: &Opts) -> Result<Status, Failure> {
    let spec = spec(o)?;
    let opts = verify_options(o, exec(o)?);
    emit_reports(o, "quotients", |n| verify_quotients(&spec, n, &opts), false)
}

fn constant(text: &str, what: &str) -> Result<C64, Failure> {
    let p = parse(text).map_err(|e| Failure::Usage(format!("--{what}: {e}")))?;
    match p.degree() {
        None => Ok(C64::new(0.0, 0.0)),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(Failure::Usage(format!("--{what} must be a number for qdisc, got '{text}'"))),
    }
}

/// Real values print without an imaginary part; noise beyond ten decimals
/// is rounded away.
fn show(z: C64) -> String {
    let part = |x: f64| {
        if x != 0.0 && (x.abs() >= 1e15 || x.abs() < 1e-6) {
            return format!("{x:e}");
        }
        let s = format!("{x:.10}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    };
    if z.im.abs() <= 1e-12 * z.norm().max(1.0) {
        part(z.re)
    } else {
        format!("{}{}{}i", part(z.re), if z.im < 0.0 { "-" } else { "+" }, part(z.im.abs()))
    }
}

pub fn qdisc(o: &Opts) -> Result<Status, Failure> {
    let sink = Sink::new(o)?;
    let Some(q) = &o.q else {
        let report = verify_qdisc_consistency(o.samples.unwrap_or(200), o.seed.unwrap_or(0))?;
        let a = &report.aggregates;
        eprintln!("{} rows: max path gap {:.1e}, max ratio error {:.1e}", a.rows, a.max_path_rel_diff, a.max_ratio_error);
        for f in o.formats_or(&[Format::Json]) {
            match f {
                Format::Json => sink.emit("qdisc_report.json", &(report.to_json() + "\n"))?,
                _ => return Err(unsupported("qdisc", f)),
            }
        }
        return Ok(if a.agree { Status::Clean } else { Status::NonCertified });
    };
    let missing = |what: &str| Failure::Usage(format!("missing --{what}"));
    let k = o.k.ok_or_else(|| missing("k"))?;
    let l = o.l.ok_or_else(|| missing("l"))?;
    let a = constant(o.a.as_deref().ok_or_else(|| missing("A"))?, "A")?;
    let b = constant(o.b.as_deref().ok_or_else(|| missing("B"))?, "B")?;
    let q = constant(q, "q")?;
    RecurrenceSpec::new(k, l, polyzeros::ComplexPoly::constant(a), polyzeros::ComplexPoly::constant(b))?;
    let row = qdisc_row(RowOrigin::Given, a, b, k, l, q)?;
    println!("{}", show(row.definitional));
    eprintln!("q-derivative path {}", show(row.ismail));
    if let Some(cf) = row.closed_form {
        eprintln!("trinomial closed form {} (ratio to definition {})", show(cf), show(row.ratio.expect("set with closed form")));
    }
    if let Some(ord) = row.ordinary {
        eprintln!("ordinary discriminant {}", show(ord));
    }
    if !sink.to_stdout() {
        for f in o.formats_or(&[Format::Json]) {
            match f {
                Format::Json => sink.emit("qdisc.json", &json(&row))?,
                _ => return Err(unsupported("qdisc", f)),
            }
        }
    } else if o.format.contains(&Format::Json) {
        sink.emit("", &json(&row))?;
    }
    Ok(Status::Clean)
}

pub fn figure(o: &Opts) -> Result<Status, Failure> {
    let id = o.example.as_deref().ok_or_else(|| Failure::Usage("figure needs --example (5.1, 5.2, 5.3 or 5.4)".into()))?;
    let ex = example(id)?;
    let d = FigureOptions::default();
    let nodes = match &o.grid {
        Some(t) => {
            let (nx, ny) = parse_grid(t)?;
            nx.max(ny)
        }
        None => d.nodes,
    };
    let bbox = o.bbox.as_deref().map(str::parse::<BBox>).transpose()?;
    let opts = FigureOptions { nodes, bbox, exec: exec(o)?, ..d };
    let sink = Sink::new(o)?;
    let default: &[Format] = if sink.to_stdout() { &[Format::Svg] } else { &[Format::Svg, Format::Csv] };
    let mut status = Status::Clean;
    for n in indices(o)? {
        let fig = reproduce_figure(id, n, &opts)?;
        if !fig.zeros.is_certified() {
            status = status.max(Status::NonCertified);
        }
        eprintln!("example {id}, n={n}: {} zeros, {} curve polylines", fig.zeros.len(), fig.net.polylines.len());
        let stem = format!("{}_n{n}", id.replace('.', "_"));
        let title = format!("k={}, l={}, A = {}, B = {}: zeros of P_{n}", ex.k, ex.l, ex.a, ex.b);
        for f in o.formats_or(default) {
            match f {
                Format::Svg => sink.emit(&format!("figure_{stem}.svg"), &curve_svg(&fig.net, Some(fig.zeros.roots()), &title))?,
                Format::Csv => {
                    sink.emit(&format!("zeros_{stem}.csv"), &zeros_csv(&fig.zeros))?;
                    sink.emit(&format!("curve_{stem}.csv"), &curve_csv(&fig.net))?;
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        example: &'a str,
                        n: usize,
                        zeros: &'a RootSet,
                        curve: &'a polyzeros::curvetrace::CurveNet,
                    }
                    let body = json(&Out { example: id, n, zeros: &fig.zeros, curve: &fig.net });
                    sink.emit(&format!("figure_{stem}.json"), &body)?;
                }
            }
        }
    }
    Ok(status)
}
