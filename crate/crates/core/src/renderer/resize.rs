use super::image::Image;
use crate::error::{Error, Result};

/// Scales isotropically until the image covers `target_w × target_h`, then
/// crops the center. Bilinear sampling with pixel-center alignment and
/// clamped edges. Never mirrors.
pub fn center_crop_resize(img: &Image, target_w: u32, target_h: u32) -> Result<Image> {
    if target_w == 0 || target_h == 0 {
        return Err(Error::invalid(format!("zero-sized resize target {target_w}x{target_h}")));
    }
    let (sw, sh) = (img.width(), img.height());
    if sw == 0 || sh == 0 {
        return Err(Error::invalid("cannot resize an empty image"));
    }
    if (sw, sh) == (target_w, target_h) {
        return Ok(img.clone());
    }
    let scale = (f64::from(target_w) / f64::from(sw)).max(f64::from(target_h) / f64::from(sh));
    let iw = ((f64::from(sw) * scale).round() as u32).max(target_w);
    let ih = ((f64::from(sh) * scale).round() as u32).max(target_h);
    let x0 = (iw - target_w) / 2;
    let y0 = (ih - target_h) / 2;
    let fx = f64::from(sw) / f64::from(iw);
    let fy = f64::from(sh) / f64::from(ih);

    let axis = |dst: u32, offset: u32, factor: f64, len: u32| -> (usize, usize, f64) {
        let s = (f64::from(dst + offset) + 0.5) * factor - 0.5;
        let s = s.clamp(0.0, f64::from(len - 1));
        let lo = s.floor() as usize;
        let hi = (lo + 1).min(len as usize - 1);
        (lo, hi, s - lo as f64)
    };

    let src = img.pixels();
    let stride = sw as usize * 3;
    let mut out = Vec::with_capacity(target_w as usize * target_h as usize * 3);
    let cols: Vec<_> = (0..target_w).map(|c| axis(c, x0, fx, sw)).collect();
    for r in 0..target_h {
        let (y_lo, y_hi, ty) = axis(r, y0, fy, sh);
        for &(x_lo, x_hi, tx) in &cols {
            for k in 0..3 {
                let p = |x: usize, y: usize| f64::from(src[y * stride + x * 3 + k]);
                let top = p(x_lo, y_lo) + (p(x_hi, y_lo) - p(x_lo, y_lo)) * tx;
                let bot = p(x_lo, y_hi) + (p(x_hi, y_hi) - p(x_lo, y_hi)) * tx;
                let v = top + (bot - top) * ty;
                out.push(v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    Image::from_raw(target_w, target_h, out)
}
