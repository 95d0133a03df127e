//! Artifact writers. Each takes a free-form `header` that is embedded as
//! comment lines (a `tEXt` chunk for PNG), so outputs carry their run config.

use super::boxcount::BoxCountResult;
use super::orbit::FinalClass;
use super::render::{Cell, Grid, Mask};
use std::io::{self, Write};

const BANDS: [[u8; 3]; 6] = [
    [66, 133, 244],
    [52, 168, 83],
    [251, 188, 5],
    [0, 172, 193],
    [171, 71, 188],
    [255, 112, 67],
];

/// RGB colour for a cell: bands cycle through [`BANDS`] by first band level,
/// Julia candidates are black, `D_1` residents red, unresolved orbits grey.
pub fn palette(cell: &Cell) -> [u8; 3] {
    match cell.final_class {
        FinalClass::FastEscaping => BANDS[(cell.first_b_level.unwrap_or(1) - 1) % BANDS.len()],
        FinalClass::JuliaCandidate => [0, 0, 0],
        FinalClass::TrappedD1 => [200, 30, 30],
        FinalClass::Budget => [128, 128, 128],
    }
}

fn comment_lines(w: &mut impl Write, header: &str) -> io::Result<()> {
    for line in header.lines() {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

fn rgb(g: &Grid) -> Vec<u8> {
    g.cells.iter().flat_map(palette).collect()
}

/// Binary PPM (P6).
pub fn grid_ppm(g: &Grid, header: &str, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "P6")?;
    comment_lines(&mut w, header)?;
    writeln!(w, "{} {}\n255", g.nx, g.ny)?;
    w.write_all(&rgb(g))
}

pub fn grid_png(g: &Grid, header: &str, w: impl Write) -> io::Result<()> {
    let mut enc = png::Encoder::new(w, g.nx as u32, g.ny as u32);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    enc.add_text_chunk("config".into(), header.into()).map_err(io::Error::other)?;
    let mut writer = enc.write_header().map_err(io::Error::other)?;
    writer.write_image_data(&rgb(g)).map_err(io::Error::other)?;
    writer.finish().map_err(io::Error::other)
}

/// Binary PBM (P4), set pixels black.
pub fn mask_pbm(m: &Mask, header: &str, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "P4")?;
    comment_lines(&mut w, header)?;
    writeln!(w, "{} {}", m.nx, m.ny)?;
    let stride = m.nx.div_ceil(8);
    let mut row = vec![0u8; stride];
    for j in 0..m.ny {
        row.fill(0);
        for i in 0..m.nx {
            if m.get(i, j) {
                row[i / 8] |= 0x80 >> (i % 8);
            }
        }
        w.write_all(&row)?;
    }
    Ok(())
}

pub fn boxcount_csv(r: &BoxCountResult, header: &str, mut w: impl Write) -> io::Result<()> {
    comment_lines(&mut w, header)?;
    writeln!(w, "# slope = least-squares fit of log N against log(1/epsilon)")?;
    writeln!(w, "# slope,{:e}\n# slope_stderr,{:e}", r.slope, r.slope_stderr)?;
    writeln!(w, "epsilon,count")?;
    for (e, n) in r.epsilons.iter().zip(&r.counts) {
        writeln!(w, "{e:e},{n}")?;
    }
    Ok(())
}

/// One row per exponent `t`.
pub fn whitney_csv(rows: &[(f64, f64)], header: &str, mut w: impl Write) -> io::Result<()> {
    comment_lines(&mut w, header)?;
    writeln!(w, "t,whitney_sum")?;
    for (t, s) in rows {
        writeln!(w, "{t:e},{s:e}")?;
    }
    Ok(())
}
