use std::fmt;

use serde::{Deserialize, Serialize};

use super::CodecError;

/// Shape of an image tensor, channels first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
}

impl Dims {
    pub const fn new(channels: usize, height: usize, width: usize) -> Self {
        Dims { channels, height, width }
    }

    pub fn sample_count(&self) -> usize {
        self.channels * self.height * self.width
    }

    pub fn pixel_count(&self) -> usize {
        self.height * self.width
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        if !matches!(self.channels, 1 | 3) || self.height == 0 || self.width == 0 {
            return Err(CodecError::InvalidDims(*self));
        }
        Ok(())
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.channels, self.height, self.width)
    }
}

/// A C×H×W grid of samples in [0, 1], stored row-major per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTensor {
    dims: Dims,
    data: Vec<f64>,
}

impl ImageTensor {
    /// Builds a tensor, checking shape, length and sample range.
    pub fn new(dims: Dims, data: Vec<f64>) -> Result<Self, CodecError> {
        dims.validate()?;
        if data.len() != dims.sample_count() {
            return Err(CodecError::LengthMismatch { expected: dims.sample_count(), actual: data.len() });
        }
        if let Some((index, &value)) =
            data.iter().enumerate().find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v)))
        {
            return Err(CodecError::SampleOutOfRange { index, value });
        }
        Ok(ImageTensor { dims, data })
    }

    pub fn filled(dims: Dims, value: f64) -> Result<Self, CodecError> {
        ImageTensor::new(dims, vec![value; dims.sample_count()])
    }

    /// Builds a tensor from `f(channel, y, x)`. Values are clamped into [0, 1].
    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self, CodecError> {
        dims.validate()?;
        let mut data = Vec::with_capacity(dims.sample_count());
        for c in 0..dims.channels {
            for y in 0..dims.height {
                for x in 0..dims.width {
                    data.push(clamp_unit(f(c, y, x)));
                }
            }
        }
        ImageTensor::new(dims, data)
    }

    /// Internal constructor for samples already known to be valid.
    pub(crate) fn from_raw(dims: Dims, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dims.sample_count());
        ImageTensor { dims, data }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn channels(&self) -> usize {
        self.dims.channels
    }

    pub fn height(&self) -> usize {
        self.dims.height
    }

    pub fn width(&self) -> usize {
        self.dims.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let plane = self.dims.pixel_count();
        &self.data[c * plane..(c + 1) * plane]
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.data[self.index(c, y, x)]
    }

    #[inline]
    pub(crate) fn set(&mut self, c: usize, y: usize, x: usize, v: f64) {
        let i = self.index(c, y, x);
        self.data[i] = v;
    }

    #[inline]
    fn index(&self, c: usize, y: usize, x: usize) -> usize {
        (c * self.dims.height + y) * self.dims.width + x
    }

    /// Sample-wise equality on the IEEE-754 bit patterns.
    pub fn bit_eq(&self, other: &ImageTensor) -> bool {
        self.dims == other.dims
            && self.data.iter().zip(&other.data).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

pub(crate) fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}
