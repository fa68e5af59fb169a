use std::fmt::Write as _;
use std::path::Path;

use super::ExperimentRecord;
use crate::error::{Error, Result};

/// Writes record.json, ratios.csv and ratios.svg into `dir`, creating it if needed.
pub fn write_outputs(record: &ExperimentRecord, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(record).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(dir.join("record.json"), json)?;
    let mut w = csv::Writer::from_path(dir.join("ratios.csv")).map_err(|e| Error::Io(e.to_string()))?;
    w.write_record(["N", "R"]).map_err(|e| Error::Io(e.to_string()))?;
    for (n, r) in record.ratios() {
        w.write_record([n.to_string(), format!("{r:.12e}")])
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    std::fs::write(dir.join("ratios.svg"), render_svg(record))?;
    Ok(())
}

/// R against ln N as a polyline with point markers.
pub fn render_svg(record: &ExperimentRecord) -> String {
    let (w, h, pad) = (480.0, 320.0, 40.0);
    let pts: Vec<(f64, f64)> = record.ratios().iter().map(|&(n, r)| ((n as f64).ln(), r)).collect();
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if !pts.is_empty() {
        let (x0, x1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.0), a.1.max(p.0)));
        let y1 = pts.iter().fold(0.0f64, |a, p| a.max(p.1));
        let sx = |x: f64| pad + (x - x0) / (x1 - x0).max(1e-12) * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - y / y1.max(1e-300) * (h - 2.0 * pad);
        let line: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="black" points="{}"/>"#, line.join(" "));
        for (p, (n, r)) in pts.iter().zip(record.ratios()) {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3"><title>N={n} R={r:.4}</title></circle>"#, sx(p.0), sy(p.1));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12">ln N</text>"#, w / 2.0, h - 8.0);
        let _ = writeln!(s, r#"<text x="4" y="{}" font-size="12">R</text>"#, h / 2.0);
    }
    s.push_str("</svg>\n");
    s
}
