use crate::atlas::{Dynamics, Stratum};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub type Rgb = [u8; 3];

/// Colors keyed by label: stratum labels (`O++_Lplus`, `HE1`, ...) and
/// dynamics names (`TwoSided`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette(pub BTreeMap<String, Rgb>);

fn stratum_color(s: Stratum) -> Rgb {
    match s {
        Stratum::OMinusMinus => [70, 130, 180],
        Stratum::OPlusMinus => [100, 149, 237],
        Stratum::OMinusPlus => [135, 206, 235],
        Stratum::LPlus => [220, 20, 60],
        Stratum::LMinus => [255, 140, 0],
        Stratum::Tilde => [46, 139, 87],
        Stratum::H1Plus | Stratum::H1Minus => [255, 255, 255],
        Stratum::H2Plus | Stratum::H2Minus => [211, 211, 211],
        Stratum::H12Plus | Stratum::H12Minus => [128, 128, 128],
        Stratum::HE1 => [0, 0, 0],
        Stratum::HE2 => [75, 0, 130],
        Stratum::HE1andHE2 => [255, 0, 255],
        Stratum::Degenerate => [255, 255, 0],
    }
}

fn dynamics_color(d: Dynamics) -> Rgb {
    match d {
        Dynamics::TwoSided => [46, 139, 87],
        Dynamics::UpLorenzPlusFakeHorseshoe => [220, 20, 60],
        Dynamics::DownLorenzPlusFakeHorseshoe => [255, 140, 0],
        Dynamics::FatLorenz => [128, 128, 128],
        Dynamics::CollisionBoundary => [0, 0, 0],
        Dynamics::DoubleFullLorenz => [255, 0, 255],
    }
}

const DYNAMICS: [Dynamics; 6] = [
    Dynamics::TwoSided,
    Dynamics::UpLorenzPlusFakeHorseshoe,
    Dynamics::DownLorenzPlusFakeHorseshoe,
    Dynamics::FatLorenz,
    Dynamics::CollisionBoundary,
    Dynamics::DoubleFullLorenz,
];

impl Default for Palette {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        for s in Stratum::ALL {
            map.insert(s.label().to_string(), stratum_color(s));
        }
        for d in DYNAMICS {
            map.insert(d.to_string(), dynamics_color(d));
        }
        Palette(map)
    }
}

impl Palette {
    pub fn get(&self, label: &str) -> Result<Rgb> {
        self.0
            .get(label)
            .copied()
            .ok_or_else(|| Error::MissingPaletteEntry(label.to_string()))
    }
}

/// Binary PPM (P6) with one pixel per label, `labels` given row-major with
/// the top row first.
pub fn render_ppm(
    labels: &[&str],
    width: usize,
    height: usize,
    palette: &Palette,
) -> Result<Vec<u8>> {
    if labels.len() != width * height {
        return Err(Error::Precondition(format!(
            "{} labels for a {width}x{height} raster",
            labels.len()
        )));
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    for label in labels {
        out.extend(palette.get(label)?);
    }
    Ok(out)
}
