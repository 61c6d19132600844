//! CSV and SVG emitters. Floats are written in their shortest round-trip
//! form so that repeated runs give byte-identical files.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::curvetrace::{BBox, CurveNet, DominanceField, SignClass};
use crate::polyparse::format_poly;
use crate::recurrence::SequenceWindow;
use crate::rootfind::RootSet;
use crate::verify::VerificationReport;
use crate::TOOL_VERSION;

pub const CANVAS: f64 = 800.0;
pub const MARGIN: f64 = 40.0;

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn curve_csv(net: &CurveNet) -> String {
    let mut s = String::from("segment,vertex,re,im,re_w,sign_class\n");
    for (id, p) in net.polylines.iter().enumerate() {
        for (i, v) in p.vertices.iter().enumerate() {
            let _ = writeln!(s, "{id},{i},{},{},{},{}", num(v.z.re), num(v.z.im), num(v.w.re), v.class.as_str());
        }
    }
    s
}

pub fn dominance_csv(field: &DominanceField) -> String {
    let mut s = String::from("i,j,re,im,class,certified,modulus_gap,switch\n");
    let nx = field.grid.nx;
    for (idx, n) in field.nodes.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            idx % nx,
            idx / nx,
            num(n.z.re),
            num(n.z.im),
            n.class.as_str(),
            n.certified,
            num(n.modulus_gap),
            n.switch
        );
    }
    s
}

pub fn zeros_csv(rs: &RootSet) -> String {
    let mut s = String::from("index,re,im,residual\n");
    for (i, (z, r)) in rs.sorted_with_residuals().into_iter().enumerate() {
        let _ = writeln!(s, "{i},{},{},{}", num(z.re), num(z.im), num(r));
    }
    s
}

/// One row per zero of a verification report; optional distances are empty
/// when not computed.
pub fn report_csv(r: &VerificationReport) -> String {
    let mut s = String::from("index,re,im,abs_a,abs_b,re_w,im_w,im_defect,re_sign_ok,gamma_distance,quartic_distance,passed,flags\n");
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    for (i, z) in r.records.iter().enumerate() {
        let flags: Vec<&str> = z.flags.iter().map(|f| f.as_str()).collect();
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{},{},{},{},{},{},{},{}",
            num(z.z.re),
            num(z.z.im),
            num(z.abs_a),
            num(z.abs_b),
            num(z.w.re),
            num(z.w.im),
            num(z.im_defect),
            z.re_sign_ok,
            opt(z.gamma_distance),
            opt(z.quartic_distance),
            z.passed,
            flags.join(";")
        );
    }
    s
}

/// One row per coefficient of each `P_n`.
pub fn sequence_csv(window: &SequenceWindow) -> String {
    let mut s = String::from("n,power,re,im\n");
    for (n, p) in window.polys.iter().enumerate() {
        for (i, c) in p.coeffs().iter().enumerate() {
            let _ = writeln!(s, "{n},{i},{},{}", num(c.re), num(c.im));
        }
    }
    s
}

/// `P_n` as text, one per line.
pub fn sequence_text(window: &SequenceWindow) -> String {
    let mut s = String::new();
    for (n, p) in window.polys.iter().enumerate() {
        let _ = writeln!(s, "P_{n} = {}", format_poly(p, 'z'));
    }
    s
}

struct Frame {
    bbox: BBox,
}

impl Frame {
    fn x(&self, re: f64) -> f64 {
        MARGIN + (re - self.bbox.x0) / (self.bbox.x1 - self.bbox.x0) * (CANVAS - 2.0 * MARGIN)
    }

    // Im up
    fn y(&self, im: f64) -> f64 {
        CANVAS - MARGIN - (im - self.bbox.y0) / (self.bbox.y1 - self.bbox.y0) * (CANVAS - 2.0 * MARGIN)
    }

    fn point(&self, z: C64) -> String {
        format!("{:.2},{:.2}", self.x(z.re), self.y(z.im))
    }
}

fn class_style(c: SignClass) -> &'static str {
    match c {
        SignClass::Admissible => r##"stroke="#1f5fbf" stroke-width="1.6""##,
        SignClass::Excluded => r##"stroke="#9a9a9a" stroke-width="1" stroke-dasharray="4 3""##,
    }
}

/// The traced curve, optionally with zeros overlaid, on an 800×800 canvas.
pub fn curve_svg(net: &CurveNet, zeros: Option<&[C64]>, title: &str) -> String {
    let f = Frame { bbox: net.grid.bbox };
    let b = f.bbox;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(s, "<!-- {TOOL_VERSION} -->");
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (f.x(b.x0), f.x(b.x1), f.y(b.y0), f.y(b.y1));
    let _ = writeln!(
        s,
        r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    if b.y0 <= 0.0 && b.y1 >= 0.0 {
        let y = f.y(0.0);
        let _ = writeln!(s, r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#444" stroke-width="0.6"/>"##);
    }
    if b.x0 <= 0.0 && b.x1 >= 0.0 {
        let x = f.x(0.0);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#444" stroke-width="0.6"/>"##);
    }
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{y:.2}" font-size="11" font-family="sans-serif" text-anchor="{anchor}">{text}</text>"#);
    };
    label(&mut s, x0, y0 + 14.0, "start", num(b.x0));
    label(&mut s, x1, y0 + 14.0, "end", num(b.x1));
    label(&mut s, x0 - 4.0, y0, "end", num(b.y0));
    label(&mut s, x0 - 4.0, y1 + 10.0, "end", num(b.y1));
    label(&mut s, (x0 + x1) / 2.0, y0 + 28.0, "middle", "Re z".into());
    label(&mut s, CANVAS / 2.0, 24.0, "middle", escape(title));

    for p in &net.polylines {
        // split into runs of equal sign class
        let mut start = 0;
        while start + 1 < p.vertices.len() {
            let class = p.vertices[start].class;
            let mut end = start + 1;
            while end + 1 < p.vertices.len() && p.vertices[end].class == class {
                end += 1;
            }
            let pts: Vec<String> = p.vertices[start..=end].iter().map(|v| f.point(v.z)).collect();
            let _ = writeln!(s, r#"<polyline fill="none" {} points="{}"/>"#, class_style(class), pts.join(" "));
            start = end;
        }
    }
    if let Some(zs) = zeros {
        for z in zs.iter().filter(|z| b.contains(**z)) {
            let _ = writeln!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#d62728"/>"##, f.x(z.re), f.y(z.im));
        }
    }

    // legend
    let (lx, ly) = (MARGIN + 10.0, MARGIN + 14.0);
    let _ = writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="190" height="{}" fill="white" fill-opacity="0.85" stroke="black" stroke-width="0.5"/>"#, lx - 6.0, ly - 12.0, if zeros.is_some() { 56 } else { 40 });
    let entries = [(SignClass::Admissible, "Im w = 0, admissible"), (SignClass::Excluded, "Im w = 0, excluded")];
    for (i, (c, text)) in entries.iter().enumerate() {
        let y = ly + 16.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {}/>"#, y - 4.0, lx + 24.0, y - 4.0, class_style(*c));
        label(&mut s, lx + 30.0, y, "start", text.to_string());
    }
    if zeros.is_some() {
        let y = ly + 32.0;
        let _ = writeln!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#d62728"/>"##, lx + 12.0, y - 4.0);
        label(&mut s, lx + 30.0, y, "start", "zeros of P_n".into());
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
