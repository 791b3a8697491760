//! Binary PGM (P5) renders of two-dimensional clusters. Occupied sites are
//! shaded by adjunction order with a mild ring banding, so growth layers
//! show up the way they do in the classic aggregate pictures.

use anyhow::{bail, Result};
use rotorlab_core::lattice::Point;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

pub fn render_pgm(path: &Path, arrival: &BTreeMap<Point, u64>, n: u64) -> Result<()> {
    if arrival.is_empty() {
        bail!("nothing to render");
    }
    let d = arrival.keys().next().unwrap().dim();
    if d != 2 {
        bail!("renders are only available in d=2 (got d={d})");
    }
    let (mut x0, mut x1, mut y0, mut y1) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
    for p in arrival.keys() {
        x0 = x0.min(p.coord(0));
        x1 = x1.max(p.coord(0));
        y0 = y0.min(p.coord(1));
        y1 = y1.max(p.coord(1));
    }
    let width = (x1 - x0) as usize + 3;
    let height = (y1 - y0) as usize + 3;
    let mut pixels = vec![255u8; width * height];
    for (p, &idx) in arrival {
        // rows top-down: image y grows downward, lattice y upward
        let col = (p.coord(0) - x0) as usize + 1;
        let row = (y1 - p.coord(1)) as usize + 1;
        let t = (idx.saturating_sub(1)) as f64 / n.max(1) as f64;
        let mut shade = 30.0 + 170.0 * t;
        if ((t * 16.0) as u64) % 2 == 1 {
            shade -= 22.0;
        }
        pixels[row * width + col] = shade.clamp(0.0, 230.0) as u8;
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(out, "P5\n{width} {height}\n255\n")?;
    out.write_all(&pixels)?;
    out.flush()?;
    Ok(())
}
