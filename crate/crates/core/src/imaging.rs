//! Frame storage and the red channel threshold stage.

use std::path::Path;

use crate::error::{Error, Result};

/// One captured camera frame, 8-bit RGB, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 3]>,
}

impl Frame {
    pub fn new(width: u32, height: u32, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::InvalidImage(format!(
                "pixel buffer holds {} entries, {width}x{height} needs {expected}",
                pixels.len()
            )));
        }
        Ok(Frame { width, height, pixels })
    }

    pub fn black(width: u32, height: u32) -> Result<Self> {
        Frame::new(width, height, vec![[0, 0, 0]; width as usize * height as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, value: [u8; 3]) {
        self.pixels[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn read_png(path: impl AsRef<Path>) -> Result<Self> {
        let decoded = image::ImageReader::open(path)?.decode()?;
        match decoded {
            image::DynamicImage::ImageRgb8(buf) => {
                let (w, h) = buf.dimensions();
                let pixels = buf.into_raw().chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
                Frame::new(w, h, pixels)
            }
            // the alpha channel carries no scan information, drop it
            image::DynamicImage::ImageRgba8(buf) => {
                let (w, h) = buf.dimensions();
                let pixels = buf.into_raw().chunks_exact(4).map(|c| [c[0], c[1], c[2]]).collect();
                Frame::new(w, h, pixels)
            }
            other => Err(Error::UnsupportedColorType(format!("{:?}", other.color()))),
        }
    }

    pub fn write_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut raw = Vec::with_capacity(self.pixels.len() * 3);
        for px in &self.pixels {
            raw.extend_from_slice(px);
        }
        image::save_buffer_with_format(
            path.as_ref(),
            &raw,
            self.width,
            self.height,
            image::ExtendedColorType::Rgb8,
            image::ImageFormat::Png,
        )?;
        Ok(())
    }
}

/// Single channel 8-bit image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if data.len() != expected {
            return Err(Error::InvalidImage(format!(
                "value buffer holds {} entries, {width}x{height} needs {expected}",
                data.len()
            )));
        }
        Ok(GrayImage { width, height, data })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.data[y as usize * self.width as usize + x as usize]
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }
}

/// Boolean lit/unlit mask produced by thresholding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    mask: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: u32, height: u32, mask: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if mask.len() != expected {
            return Err(Error::InvalidImage(format!(
                "mask holds {} entries, {width}x{height} needs {expected}",
                mask.len()
            )));
        }
        Ok(BinaryImage { width, height, mask })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.mask[y as usize * self.width as usize + x as usize]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn lit_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Renders the mask back to a {0, 255} valued image.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.mask.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        }
    }
}

/// Extracts the red channel, the laser line is red and this is the
/// only channel the rest of the pipeline looks at.
pub fn red_channel(frame: &Frame) -> GrayImage {
    GrayImage {
        width: frame.width,
        height: frame.height,
        data: frame.pixels.iter().map(|px| px[0]).collect(),
    }
}

fn check_alpha(alpha: u8) -> Result<()> {
    if alpha == 0 || alpha == 255 {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    Ok(())
}

/// Binarizes an intensity image: a pixel is lit when its value is >= alpha.
/// Alpha must lie strictly inside (0, 255) so that neither branch is vacuous.
pub fn threshold(image: &GrayImage, alpha: u8) -> Result<BinaryImage> {
    check_alpha(alpha)?;
    Ok(BinaryImage {
        width: image.width,
        height: image.height,
        mask: image.data.iter().map(|&v| v >= alpha).collect(),
    })
}

/// Fused red channel extraction plus threshold in one pass over the frame.
/// Bit-identical to `threshold(&red_channel(frame), alpha)`.
pub fn threshold_red(frame: &Frame, alpha: u8) -> Result<BinaryImage> {
    check_alpha(alpha)?;
    Ok(BinaryImage {
        width: frame.width,
        height: frame.height,
        mask: frame.pixels.iter().map(|px| px[0] >= alpha).collect(),
    })
}
