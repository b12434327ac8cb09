//! Deterministic rendering of limit-set samples to SVG and binary PPM.

use num_complex::Complex64;

use crate::circle::GeneralizedCircle;
use crate::error::{Error, Result};
use crate::schottky::LimitSetSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Ppm,
}

impl std::str::FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(RenderFormat::Svg),
            "ppm" => Ok(RenderFormat::Ppm),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Raster and threading options; SVG output ignores the pixel sizes.
#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub width: usize,
    pub height: usize,
    pub threads: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 800,
            height: 800,
            threads: 1,
        }
    }
}

pub fn render_limit_set(
    sample: &LimitSetSample,
    format: RenderFormat,
    options: &RenderOptions,
) -> Result<Vec<u8>> {
    if sample.levels.is_empty() {
        return Err(Error::InvalidArgument("empty limit-set sample".into()));
    }
    match format {
        RenderFormat::Svg => Ok(render_svg(sample).into_bytes()),
        RenderFormat::Ppm => render_ppm(sample, options),
    }
}

/// World-coordinate bounding box of the first level, with a margin.
fn world_bounds(sample: &LimitSetSample) -> (f64, f64, f64, f64) {
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let mut include = |z: Complex64, r: f64| {
        min_x = min_x.min(z.re - r);
        max_x = max_x.max(z.re + r);
        min_y = min_y.min(z.im - r);
        max_y = max_y.max(z.im + r);
    };
    for disc in &sample.levels[0] {
        match disc.circle {
            GeneralizedCircle::Circle { center, radius } => include(center, radius),
            GeneralizedCircle::Line { point, .. } => include(point, 1.0),
        }
    }
    if !min_x.is_finite() {
        return (-1.0, -1.0, 2.0, 2.0);
    }
    let width = (max_x - min_x).max(1e-6);
    let height = (max_y - min_y).max(1e-6);
    let margin = 0.1 * width.max(height);
    (
        min_x - margin,
        min_y - margin,
        width + 2.0 * margin,
        height + 2.0 * margin,
    )
}

fn render_svg(sample: &LimitSetSample) -> String {
    let (x0, y0, w, h) = world_bounds(sample);
    let stroke = 0.002 * w.max(h);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
        x0, y0, w, h
    ));
    out.push_str(&format!(
        "<desc>limit set sample: genus={} depth={} discs={}</desc>\n",
        sample.genus,
        sample.depth,
        sample.total_disc_count()
    ));
    for (level_index, level) in sample.levels.iter().enumerate() {
        let depth = level_index + 1;
        let fill = if depth == sample.depth {
            "black"
        } else {
            "none"
        };
        out.push_str(&format!(
            "<g id=\"depth-{}\" fill=\"{}\" stroke=\"black\" stroke-width=\"{:.6}\">\n",
            depth, fill, stroke
        ));
        for disc in level {
            match disc.circle {
                GeneralizedCircle::Circle { center, radius } => {
                    out.push_str(&format!(
                        "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\"/>\n",
                        center.re, center.im, radius
                    ));
                }
                GeneralizedCircle::Line { point, direction } => {
                    let reach = 2.0 * (w + h);
                    let a = point - direction * reach;
                    let b = point + direction * reach;
                    out.push_str(&format!(
                        "<line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\"/>\n",
                        a.re, a.im, b.re, b.im
                    ));
                }
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn render_ppm(sample: &LimitSetSample, options: &RenderOptions) -> Result<Vec<u8>> {
    let width = options.width;
    let height = options.height;
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(
            "raster size must be positive".into(),
        ));
    }
    let (x0, y0, w, h) = world_bounds(sample);
    // Uniform scale, image centered on the world box.
    let scale = (width as f64 / w).min(height as f64 / h);
    let cx = x0 + w / 2.0;
    let cy = y0 + h / 2.0;
    let deepest = sample.levels.last().expect("nonempty sample");

    let mut pixels = vec![255u8; width * height * 3];
    let threads = options.threads.clamp(1, height.max(1));
    let rows_per_band = height.div_ceil(threads);
    let bands: Vec<(usize, &mut [u8])> = pixels
        .chunks_mut(rows_per_band * width * 3)
        .enumerate()
        .map(|(i, chunk)| (i * rows_per_band, chunk))
        .collect();

    std::thread::scope(|scope| {
        for (first_row, band) in bands {
            scope.spawn(move || {
                for (row_offset, row) in band.chunks_mut(width * 3).enumerate() {
                    let py = first_row + row_offset;
                    // Pixel center in world coordinates (y axis points up).
                    let wy = cy + (height as f64 / 2.0 - (py as f64 + 0.5)) / scale;
                    for disc in deepest {
                        match disc.circle {
                            GeneralizedCircle::Circle { center, radius } => {
                                let dy = wy - center.im;
                                if dy.abs() > radius {
                                    continue;
                                }
                                let half = (radius * radius - dy * dy).max(0.0).sqrt();
                                let px_left = ((center.re - half - cx) * scale + width as f64 / 2.0)
                                    .floor()
                                    .max(0.0)
                                    as usize;
                                let px_right =
                                    (((center.re + half - cx) * scale + width as f64 / 2.0).ceil()
                                        as usize)
                                        .min(width);
                                for px in px_left..px_right {
                                    let wx = cx + (px as f64 + 0.5 - width as f64 / 2.0) / scale;
                                    let dx = wx - center.re;
                                    if dx * dx + dy * dy <= radius * radius {
                                        let at = px * 3;
                                        row[at] = 0;
                                        row[at + 1] = 0;
                                        row[at + 2] = 0;
                                    }
                                }
                            }
                            GeneralizedCircle::Line { point, direction } => {
                                // Half-planes have no canonical interior in a
                                // raster; draw the boundary line one pixel wide.
                                for px in 0..width {
                                    let wx = cx + (px as f64 + 0.5 - width as f64 / 2.0) / scale;
                                    let z = Complex64::new(wx, wy);
                                    let offset = ((z - point) * direction.conj()).im;
                                    if offset.abs() * scale <= 0.5 {
                                        let at = px * 3;
                                        row[at] = 0;
                                        row[at + 1] = 0;
                                        row[at + 2] = 0;
                                    }
                                }
                            }
                        }
                    }
                }
            });
        }
    });

    let mut out = Vec::with_capacity(pixels.len() + 128);
    out.extend_from_slice(b"P6\n");
    out.extend_from_slice(
        format!(
            "# limit set sample: genus={} depth={} discs={}\n",
            sample.genus,
            sample.depth,
            sample.total_disc_count()
        )
        .as_bytes(),
    );
    out.extend_from_slice(format!("{width} {height}\n255\n").as_bytes());
    out.extend_from_slice(&pixels);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::GeneralizedCircle;
    use crate::schottky::{LimitDisc, LimitSetSample};

    fn sample_two_levels() -> LimitSetSample {
        let disc = |x: f64, r: f64| LimitDisc {
            word: vec![1],
            circle: GeneralizedCircle::circle(Complex64::new(x, 0.0), r).unwrap(),
        };
        LimitSetSample {
            genus: 1,
            depth: 2,
            levels: vec![
                vec![disc(-2.0, 1.0), disc(2.0, 1.0)],
                vec![disc(-2.0, 0.25), disc(2.0, 0.25)],
            ],
            points: vec![Complex64::new(-2.0, 0.0), Complex64::new(2.0, 0.0)],
        }
    }

    #[test]
    fn svg_has_one_element_per_disc() {
        let svg = String::from_utf8(
            render_limit_set(
                &sample_two_levels(),
                RenderFormat::Svg,
                &RenderOptions::default(),
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains("depth=2"));
    }

    #[test]
    fn ppm_header_and_size() {
        let opts = RenderOptions {
            width: 64,
            height: 48,
            threads: 1,
        };
        let ppm = render_limit_set(&sample_two_levels(), RenderFormat::Ppm, &opts).unwrap();
        assert!(ppm.starts_with(b"P6\n"));
        let header_end = ppm
            .windows(4)
            .position(|w| w == b"255\n")
            .expect("maxval line")
            + 4;
        assert_eq!(ppm.len() - header_end, 64 * 48 * 3);
        let header = String::from_utf8_lossy(&ppm[..header_end]);
        assert!(header.contains("64 48"));
    }

    #[test]
    fn rendering_is_deterministic_across_threads() {
        let sample = sample_two_levels();
        let single = render_limit_set(
            &sample,
            RenderFormat::Ppm,
            &RenderOptions {
                width: 80,
                height: 60,
                threads: 1,
            },
        )
        .unwrap();
        let multi = render_limit_set(
            &sample,
            RenderFormat::Ppm,
            &RenderOptions {
                width: 80,
                height: 60,
                threads: 4,
            },
        )
        .unwrap();
        assert_eq!(single, multi);

        let svg1 = render_limit_set(&sample, RenderFormat::Svg, &RenderOptions::default()).unwrap();
        let svg2 = render_limit_set(&sample, RenderFormat::Svg, &RenderOptions::default()).unwrap();
        assert_eq!(svg1, svg2);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("svg".parse::<RenderFormat>().unwrap(), RenderFormat::Svg);
        assert_eq!("PPM".parse::<RenderFormat>().unwrap(), RenderFormat::Ppm);
        assert!(matches!(
            "gif".parse::<RenderFormat>(),
            Err(Error::UnsupportedFormat(_))
        ));
    }
}
