//! Raster (binary PPM) and vector (SVG) pictures of a two-dimensional view.
//!
//! Each integer point of the window is colored by the first tile containing
//! it, using a fixed 16-color palette indexed by tile position. Points covered
//! by no tile are drawn in [`UNCOVERED`]. Row 0 of the image is `y = y0`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use sublattice_tiling::TilingInstance;

pub const PALETTE: [[u8; 3]; 16] = [
    [0xe6, 0x19, 0x4b],
    [0x3c, 0xb4, 0x4b],
    [0x43, 0x63, 0xd8],
    [0xff, 0xe1, 0x19],
    [0xf5, 0x82, 0x31],
    [0x91, 0x1e, 0xb4],
    [0x42, 0xd4, 0xf4],
    [0xf0, 0x32, 0xe6],
    [0xbf, 0xef, 0x45],
    [0xfa, 0xbe, 0xd4],
    [0x46, 0x99, 0x90],
    [0xdc, 0xbe, 0xff],
    [0x9a, 0x63, 0x24],
    [0x80, 0x00, 0x00],
    [0x00, 0x00, 0x75],
    [0x80, 0x80, 0x80],
];

pub const UNCOVERED: [u8; 3] = [0xff, 0xff, 0xff];

/// Largest image, in pixels, the renderer will allocate.
pub const MAX_PIXELS: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("cannot draw dimension {dim} with {free} free axes; fix all but two coordinates with --slice")]
    UnsupportedDimension { dim: usize, free: usize },

    #[error("slice axis {axis} is outside dimension {dim}")]
    SliceOutOfRange { axis: usize, dim: usize },

    #[error("axis {axis} is sliced twice")]
    DuplicateSlice { axis: usize },

    #[error("image of {pixels} pixels exceeds the limit of {MAX_PIXELS}")]
    TooLarge { pixels: u64 },

    #[error("{0}")]
    Argument(String),
}

/// Half-open rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl Window {
    pub fn width(&self) -> u64 {
        (self.x1 - self.x0).max(0) as u64
    }

    pub fn height(&self) -> u64 {
        (self.y1 - self.y0).max(0) as u64
    }
}

impl FromStr for Window {
    type Err = RenderError;

    /// `x0,x1,y0,y1`.
    fn from_str(s: &str) -> Result<Self, RenderError> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| RenderError::Argument(format!("window '{s}': {e}")))?;
        let [x0, x1, y0, y1] = parts[..] else {
            return Err(RenderError::Argument(format!(
                "window '{s}' needs four integers x0,x1,y0,y1"
            )));
        };
        if x1 < x0 || y1 < y0 {
            return Err(RenderError::Argument(format!(
                "window '{s}' has negative extent"
            )));
        }
        Ok(Window { x0, x1, y0, y1 })
    }
}

/// A fixed coordinate: `axis` (0-based) held at `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slice {
    pub axis: usize,
    pub value: i64,
}

impl FromStr for Slice {
    type Err = RenderError;

    /// `x=c`, `y=c`, `z=c` for the first three axes, or `xN=c` with `N`
    /// counted from 1.
    fn from_str(s: &str) -> Result<Self, RenderError> {
        let bad = || RenderError::Argument(format!("slice '{s}' should look like z=0 or x4=1"));
        let (name, value) = s.split_once('=').ok_or_else(bad)?;
        let value: i64 = value.trim().parse().map_err(|_| bad())?;
        let axis = match name.trim() {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            n => match n.strip_prefix('x').map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => k - 1,
                _ => return Err(bad()),
            },
        };
        Ok(Slice { axis, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Svg,
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub window: Window,
    pub slices: Vec<Slice>,
    /// Pixels per lattice point along each axis.
    pub scale: u32,
}

/// Tile position per window point, rows from `y0`, each row from `x0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorGrid {
    pub width: u64,
    pub height: u64,
    pub cells: Vec<Option<usize>>,
}

impl ColorGrid {
    pub fn at(&self, col: u64, row: u64) -> Option<usize> {
        self.cells[(row * self.width + col) as usize]
    }
}

/// The two free axes of the view, in increasing order.
fn free_axes(dim: usize, slices: &[Slice]) -> Result<(usize, usize), RenderError> {
    let mut fixed = vec![false; dim];
    for s in slices {
        if s.axis >= dim {
            return Err(RenderError::SliceOutOfRange { axis: s.axis, dim });
        }
        if std::mem::replace(&mut fixed[s.axis], true) {
            return Err(RenderError::DuplicateSlice { axis: s.axis });
        }
    }
    let free: Vec<usize> = (0..dim).filter(|&i| !fixed[i]).collect();
    match free[..] {
        [a, b] => Ok((a, b)),
        _ => Err(RenderError::UnsupportedDimension {
            dim,
            free: free.len(),
        }),
    }
}

/// The point of `Z^dim` drawn at window position `(x, y)`.
pub fn view_point(
    dim: usize,
    slices: &[Slice],
    x: i64,
    y: i64,
) -> Result<Vec<BigInt>, RenderError> {
    let (a, b) = free_axes(dim, slices)?;
    let mut p = vec![BigInt::from(0); dim];
    for s in slices {
        p[s.axis] = s.value.into();
    }
    p[a] = x.into();
    p[b] = y.into();
    Ok(p)
}

pub fn color_grid(
    t: &TilingInstance,
    window: &Window,
    slices: &[Slice],
) -> Result<ColorGrid, RenderError> {
    let dim = t.dim();
    let (a, b) = free_axes(dim, slices)?;
    let (width, height) = (window.width(), window.height());
    let mut p = vec![BigInt::from(0); dim];
    for s in slices {
        p[s.axis] = s.value.into();
    }
    let mut cells = Vec::with_capacity((width * height) as usize);
    for y in window.y0..window.y1 {
        p[b] = y.into();
        for x in window.x0..window.x1 {
            p[a] = x.into();
            cells.push(t.tiles().iter().position(|c| c.contains(&p)));
        }
    }
    Ok(ColorGrid {
        width,
        height,
        cells,
    })
}

pub fn color_of(tile: Option<usize>) -> [u8; 3] {
    tile.map_or(UNCOVERED, |i| PALETTE[i % PALETTE.len()])
}

fn checked_grid(t: &TilingInstance, opts: &RenderOptions) -> Result<ColorGrid, RenderError> {
    if opts.scale == 0 {
        return Err(RenderError::Argument("scale must be at least 1".into()));
    }
    let s = u64::from(opts.scale);
    let pixels = opts
        .window
        .width()
        .saturating_mul(opts.window.height())
        .saturating_mul(s * s);
    if pixels > MAX_PIXELS {
        return Err(RenderError::TooLarge { pixels });
    }
    color_grid(t, &opts.window, &opts.slices)
}

pub fn render_ppm(t: &TilingInstance, opts: &RenderOptions) -> Result<Vec<u8>, RenderError> {
    let grid = checked_grid(t, opts)?;
    let s = u64::from(opts.scale);
    let (w, h) = (grid.width * s, grid.height * s);
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.reserve((w * h * 3) as usize);
    for row in 0..h {
        for col in 0..w {
            out.extend_from_slice(&color_of(grid.at(col / s, row / s)));
        }
    }
    Ok(out)
}

pub fn render_svg(t: &TilingInstance, opts: &RenderOptions) -> Result<String, RenderError> {
    let grid = checked_grid(t, opts)?;
    let s = u64::from(opts.scale);
    let (w, h) = (grid.width * s, grid.height * s);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#
    )
    .unwrap();
    for row in 0..grid.height {
        for col in 0..grid.width {
            let [r, g, b] = color_of(grid.at(col, row));
            writeln!(
                out,
                r##"<rect x="{}" y="{}" width="{s}" height="{s}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
                col * s,
                row * s
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render(
    t: &TilingInstance,
    opts: &RenderOptions,
    format: ImageFormat,
) -> Result<Vec<u8>, RenderError> {
    match format {
        ImageFormat::Ppm => render_ppm(t, opts),
        ImageFormat::Svg => render_svg(t, opts).map(String::into_bytes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sublattice_tiling::{make_coset, paper_counterexample, CartesianLattice};

    fn strips() -> TilingInstance {
        let l = CartesianLattice::new([2, 1]).unwrap().to_lattice();
        TilingInstance::new(vec![
            make_coset(&l, &[0.into(), 0.into()]).unwrap(),
            make_coset(&l, &[1.into(), 0.into()]).unwrap(),
        ])
        .unwrap()
    }

    fn opts(window: &str, slices: Vec<Slice>, scale: u32) -> RenderOptions {
        RenderOptions {
            window: window.parse().unwrap(),
            slices,
            scale,
        }
    }

    #[test]
    fn parses_arguments() {
        assert_eq!(
            "0,4,-1,3".parse::<Window>().unwrap(),
            Window {
                x0: 0,
                x1: 4,
                y0: -1,
                y1: 3
            }
        );
        assert!("0,4,3".parse::<Window>().is_err());
        assert!("4,0,0,1".parse::<Window>().is_err());
        assert_eq!("z=0".parse::<Slice>().unwrap(), Slice { axis: 2, value: 0 });
        assert_eq!(
            "x4=-2".parse::<Slice>().unwrap(),
            Slice { axis: 3, value: -2 }
        );
        assert!("x0=1".parse::<Slice>().is_err());
        assert!("w=1".parse::<Slice>().is_err());
    }

    #[test]
    fn strips_use_two_colors() {
        let img = render_ppm(&strips(), &opts("0,4,0,2", vec![], 1)).unwrap();
        let header = b"P6\n4 2\n255\n";
        assert_eq!(&img[..header.len()], header);
        let px: Vec<&[u8]> = img[header.len()..].chunks(3).collect();
        assert_eq!(px.len(), 8);
        for (i, p) in px.iter().enumerate() {
            assert_eq!(*p, PALETTE[i % 2].as_slice());
        }
    }

    #[test]
    fn scaling_repeats_pixels() {
        let small = color_grid(&strips(), &"0,3,0,1".parse().unwrap(), &[]).unwrap();
        let img = render_ppm(&strips(), &opts("0,3,0,1", vec![], 2)).unwrap();
        let body = &img[b"P6\n6 2\n255\n".len()..];
        for row in 0..2u64 {
            for col in 0..6u64 {
                let i = ((row * 6 + col) * 3) as usize;
                assert_eq!(&body[i..i + 3], color_of(small.at(col / 2, 0)).as_slice());
            }
        }
    }

    #[test]
    fn zero_area_gives_empty_images() {
        let img = render_ppm(&strips(), &opts("3,3,0,5", vec![], 4)).unwrap();
        assert_eq!(img, b"P6\n0 20\n255\n");
        let svg = render_svg(&strips(), &opts("0,2,1,1", vec![], 4)).unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(!svg.contains("<rect"));
    }

    #[test]
    fn slices_select_views() {
        let t = paper_counterexample(3).unwrap();
        let g = color_grid(&t, &"0,2,0,2".parse().unwrap(), &["z=0".parse().unwrap()]).unwrap();
        // in the plane z = 0, x odd lies in the third tile and the parity tile
        // takes (0,0,0)
        assert_eq!(g.cells, vec![Some(3), Some(2), Some(0), Some(2)]);
        let four = paper_counterexample(4).unwrap();
        let err = color_grid(
            &four,
            &"0,2,0,2".parse().unwrap(),
            &["z=0".parse().unwrap()],
        );
        assert_eq!(
            err,
            Err(RenderError::UnsupportedDimension { dim: 4, free: 3 })
        );
        let dup = ["z=0".parse().unwrap(), "x3=1".parse().unwrap()];
        assert_eq!(
            color_grid(&t, &"0,1,0,1".parse().unwrap(), &dup),
            Err(RenderError::DuplicateSlice { axis: 2 })
        );
    }

    #[test]
    fn output_is_reproducible() {
        let t = paper_counterexample(3).unwrap();
        let o = opts("-3,5,-2,6", vec!["z=1".parse().unwrap()], 3);
        assert_eq!(render_ppm(&t, &o).unwrap(), render_ppm(&t, &o).unwrap());
        assert_eq!(render_svg(&t, &o).unwrap(), render_svg(&t, &o).unwrap());
    }
}
