//! SVG, PLY and CSV emitters for tilings and limit sets.

use crate::orbit::{Chart, TilingSnapshot};
use crate::polytope::MirrorPolytope;
use nalgebra::DVector;
use std::fmt::Write;

/// Chart used for drawing: the one containing the polytope and its polars
/// when the Cartan matrix is of negative type, otherwise a chart centered on
/// the polytope's interior (tiles that escape it are clipped).
pub fn drawing_chart(p: &MirrorPolytope) -> Chart {
    match p.containing_affine_chart() {
        Ok(alpha) => Chart::new(alpha),
        Err(_) => Chart::new(-p.interior_point()),
    }
}

/// Tiles as polygons in an affine chart, limit-set points overlaid.
/// Dimension 2 only.
pub fn svg_tiling(
    p: &MirrorPolytope,
    snapshot: &TilingSnapshot,
    limit_points: &[DVector<f64>],
) -> String {
    assert_eq!(p.dim(), 2, "SVG rendering is for dimension 2");
    let chart = drawing_chart(p);

    // Clamp the view to a few diameters of the base tile.
    let base: Vec<DVector<f64>> = p
        .vertices()
        .iter()
        .filter_map(|v| chart.project(&v.point).ok())
        .collect();
    let radius = base
        .iter()
        .map(|u| u.norm())
        .fold(0.1f64, f64::max);
    let clip = 12.0 * radius;

    let mut polys = Vec::new();
    for tile in &snapshot.tiles {
        let mut pts = Vec::new();
        let mut ok = true;
        for x in &tile.vertex_images {
            match chart.project(x) {
                Ok(u) if u.norm() <= clip => pts.push(u),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && pts.len() >= 3 {
            // Order the polygon boundary around its centroid.
            let cx = pts.iter().map(|u| u[0]).sum::<f64>() / pts.len() as f64;
            let cy = pts.iter().map(|u| u[1]).sum::<f64>() / pts.len() as f64;
            pts.sort_by(|a, b| {
                (a[1] - cy)
                    .atan2(a[0] - cx)
                    .total_cmp(&(b[1] - cy).atan2(b[0] - cx))
            });
            polys.push(pts);
        }
    }

    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for pts in &polys {
        for u in pts {
            for k in 0..2 {
                min[k] = min[k].min(u[k]);
                max[k] = max[k].max(u[k]);
            }
        }
    }
    if !min[0].is_finite() {
        min = [-1.0, -1.0];
        max = [1.0, 1.0];
    }
    let w = (max[0] - min[0]).max(1e-6);
    let h = (max[1] - min[1]).max(1e-6);
    let pad = 0.03 * w.max(h);
    let stroke = 0.002 * w.max(h);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        min[0] - pad,
        min[1] - pad,
        w + 2.0 * pad,
        h + 2.0 * pad
    );
    for (i, pts) in polys.iter().enumerate() {
        let fill = if i == 0 { "#7a9e7e" } else { "#d8e2dc" };
        let path: Vec<String> = pts.iter().map(|u| format!("{:.6},{:.6}", u[0], u[1])).collect();
        let _ = writeln!(
            svg,
            r##"<polygon points="{}" fill="{fill}" stroke="#333" stroke-width="{stroke:.6}"/>"##,
            path.join(" ")
        );
    }
    for x in limit_points {
        if let Ok(u) = chart.project(x) {
            if u.norm() <= clip {
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="#b23a48"/>"##,
                    u[0],
                    u[1],
                    2.5 * stroke
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// ASCII PLY point cloud of the tile vertices (dimension 3).
pub fn ply_points(points: &[DVector<f64>], chart: &Chart) -> String {
    let projected: Vec<DVector<f64>> =
        points.iter().filter_map(|x| chart.project(x).ok()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "ply\nformat ascii 1.0\nelement vertex {}", projected.len());
    out.push_str("property float x\nproperty float y\nproperty float z\nend_header\n");
    for u in &projected {
        let z = if u.len() > 2 { u[2] } else { 0.0 };
        let _ = writeln!(out, "{:.8} {:.8} {:.8}", u[0], u[1], z);
    }
    out
}

/// CSV of projective points: one unit representative per row, plus the
/// source word.
pub fn csv_points(points: &[DVector<f64>], words: &[Vec<usize>]) -> String {
    let mut out = String::new();
    if let Some(first) = points.first() {
        let header: Vec<String> = (0..first.len()).map(|i| format!("x{i}")).collect();
        let _ = writeln!(out, "{},word", header.join(","));
    }
    for (x, w) in points.iter().zip(words) {
        let coords: Vec<String> = x.iter().map(|c| format!("{c:.12}")).collect();
        let word: Vec<String> = w.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "{},{}", coords.join(","), word.join("."));
    }
    out
}
