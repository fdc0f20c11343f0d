//! Dense row-major raster storage for depth maps and grayscale images.

/// Per-pixel depth in meters. A value of exactly `0.0` marks an invalid
/// (missing) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    pub width: usize,
    pub height: usize,
    data: Vec<f32>,
}

impl DepthMap {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f32>) -> Self {
        assert_eq!(data.len(), width * height, "depth buffer size mismatch");
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn in_bounds(&self, u: i64, v: i64) -> bool {
        u >= 0 && v >= 0 && (u as usize) < self.width && (v as usize) < self.height
    }

    /// Raw value at a pixel; 0.0 means invalid.
    #[inline]
    pub fn at(&self, u: usize, v: usize) -> f32 {
        self.data[v * self.width + u]
    }

    /// Depth in meters at a pixel, or `None` when missing.
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Option<f32> {
        let d = self.at(u, v);
        if d > 0.0 {
            Some(d)
        } else {
            None
        }
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize, value: f32) {
        self.data[v * self.width + u] = value;
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn valid_count(&self) -> usize {
        self.data.iter().filter(|&&d| d > 0.0).count()
    }

    /// Halves the resolution, averaging the valid depths of each 2x2 block.
    /// Blocks with no valid pixel stay invalid.
    pub fn downsample(&self) -> DepthMap {
        let w = self.width / 2;
        let h = self.height / 2;
        let mut out = DepthMap::new(w, h);
        for v in 0..h {
            for u in 0..w {
                let mut sum = 0.0f32;
                let mut n = 0u32;
                for dv in 0..2 {
                    for du in 0..2 {
                        let d = self.at(2 * u + du, 2 * v + dv);
                        if d > 0.0 {
                            sum += d;
                            n += 1;
                        }
                    }
                }
                if n > 0 {
                    out.set(u, v, sum / n as f32);
                }
            }
        }
        out
    }
}

/// Grayscale intensity image on the 0..=255 scale, stored as f32.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    data: Vec<f32>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f32>) -> Self {
        assert_eq!(data.len(), width * height, "image buffer size mismatch");
        Self {
            width,
            height,
            data,
        }
    }

    /// Standard luma conversion of an 8-bit RGB image.
    pub fn from_rgb(rgb: &image::RgbImage) -> Self {
        let (w, h) = (rgb.width() as usize, rgb.height() as usize);
        let mut data = Vec::with_capacity(w * h);
        for px in rgb.pixels() {
            let [r, g, b] = px.0;
            data.push(0.299 * r as f32 + 0.587 * g as f32 + 0.114 * b as f32);
        }
        Self {
            width: w,
            height: h,
            data,
        }
    }

    #[inline]
    pub fn in_bounds(&self, u: i64, v: i64) -> bool {
        u >= 0 && v >= 0 && (u as usize) < self.width && (v as usize) < self.height
    }

    #[inline]
    pub fn at(&self, u: usize, v: usize) -> f32 {
        self.data[v * self.width + u]
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize, value: f32) {
        self.data[v * self.width + u] = value;
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// Gaussian blur with a truncated kernel of radius `ceil(3*sigma)`,
    /// applied separably. Used to stabilize intensity comparisons.
    pub fn gaussian_blur(&self, sigma: f32) -> GrayImage {
        if sigma <= 0.0 {
            return self.clone();
        }
        let radius = (3.0 * sigma).ceil() as i64;
        let mut kernel = Vec::with_capacity((2 * radius + 1) as usize);
        let inv = -0.5 / (sigma * sigma);
        for k in -radius..=radius {
            kernel.push(((k * k) as f32 * inv).exp());
        }
        let norm: f32 = kernel.iter().sum();
        for k in &mut kernel {
            *k /= norm;
        }

        let mut tmp = GrayImage::new(self.width, self.height);
        for v in 0..self.height {
            for u in 0..self.width {
                let mut acc = 0.0;
                for (i, kw) in kernel.iter().enumerate() {
                    let uu = (u as i64 + i as i64 - radius).clamp(0, self.width as i64 - 1);
                    acc += kw * self.at(uu as usize, v);
                }
                tmp.set(u, v, acc);
            }
        }
        let mut out = GrayImage::new(self.width, self.height);
        for v in 0..self.height {
            for u in 0..self.width {
                let mut acc = 0.0;
                for (i, kw) in kernel.iter().enumerate() {
                    let vv = (v as i64 + i as i64 - radius).clamp(0, self.height as i64 - 1);
                    acc += kw * tmp.at(u, vv as usize);
                }
                out.set(u, v, acc);
            }
        }
        out
    }
}

/// Summed-area table with one extra row/column of zeros, for O(1) box sums.
pub struct IntegralImage {
    width: usize,
    sums: Vec<f64>,
}

impl IntegralImage {
    pub fn from_gray(img: &GrayImage) -> Self {
        let w = img.width + 1;
        let h = img.height + 1;
        let mut sums = vec![0.0f64; w * h];
        for v in 0..img.height {
            let mut row = 0.0f64;
            for u in 0..img.width {
                row += img.at(u, v) as f64;
                sums[(v + 1) * w + (u + 1)] = sums[v * w + (u + 1)] + row;
            }
        }
        Self { width: w, sums }
    }

    /// Sum over the inclusive pixel rectangle [u0, u1] x [v0, v1], clamped to
    /// the image.
    pub fn box_sum(&self, u0: i64, v0: i64, u1: i64, v1: i64) -> f64 {
        let w = self.width as i64;
        let h = (self.sums.len() / self.width) as i64;
        let u0 = u0.clamp(0, w - 2);
        let v0 = v0.clamp(0, h - 2);
        let u1 = (u1 + 1).clamp(1, w - 1);
        let v1 = (v1 + 1).clamp(1, h - 1);
        let at = |u: i64, v: i64| self.sums[(v * w + u) as usize];
        at(u1, v1) - at(u0, v1) - at(u1, v0) + at(u0, v0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_image_matches_naive_sum() {
        let mut img = GrayImage::new(7, 5);
        for v in 0..5 {
            for u in 0..7 {
                img.set(u, v, (u * 3 + v * 11) as f32 % 17.0);
            }
        }
        let integral = IntegralImage::from_gray(&img);
        for (u0, v0, u1, v1) in [(0, 0, 6, 4), (1, 1, 3, 2), (2, 0, 2, 0), (0, 3, 6, 3)] {
            let mut naive = 0.0f64;
            for v in v0..=v1 {
                for u in u0..=u1 {
                    naive += img.at(u, v) as f64;
                }
            }
            let fast = integral.box_sum(u0 as i64, v0 as i64, u1 as i64, v1 as i64);
            assert!((naive - fast).abs() < 1e-9, "{naive} vs {fast}");
        }
    }

    #[test]
    fn downsample_averages_valid_pixels() {
        let mut d = DepthMap::new(4, 2);
        d.set(0, 0, 1.0);
        d.set(1, 0, 3.0);
        d.set(0, 1, 2.0);
        // (1,1) left invalid; block average over the three valid pixels.
        let half = d.downsample();
        assert_eq!(half.width, 2);
        assert_eq!(half.height, 1);
        assert!((half.at(0, 0) - 2.0).abs() < 1e-6);
        assert_eq!(half.get(1, 0), None);
    }
}
