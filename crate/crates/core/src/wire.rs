//! Little-endian byte IO shared by the on-disk formats.
//!
//! Readers track their offset so corruption errors can report where the
//! stream went bad, and every length prefix is checked against the number
//! of bytes that remain before any allocation happens.

use crate::error::CoreError;

#[derive(Debug, Default)]
pub struct ByteWriter {
    buf: Vec<u8>,
}

impl ByteWriter {
    pub fn new() -> Self {
        ByteWriter { buf: Vec::new() }
    }

    pub fn put_bytes(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    pub fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_f64(&mut self, v: f64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    /// u32 length prefix followed by the raw f64 payload.
    pub fn put_f64_slice(&mut self, values: &[f64]) {
        self.put_u32(values.len() as u32);
        for &v in values {
            self.put_f64(v);
        }
    }

    /// u32 length prefix followed by u32 entries.
    pub fn put_u32_slice(&mut self, values: &[u32]) {
        self.put_u32(values.len() as u32);
        for &v in values {
            self.put_u32(v);
        }
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

#[derive(Debug)]
pub struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        ByteReader { bytes, pos: 0 }
    }

    pub fn offset(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    pub fn is_empty(&self) -> bool {
        self.remaining() == 0
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], CoreError> {
        if self.remaining() < n {
            return Err(CoreError::Truncated { offset: self.pos });
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    pub fn get_bytes(&mut self, n: usize) -> Result<&'a [u8], CoreError> {
        self.take(n)
    }

    pub fn get_magic(&mut self, expected: [u8; 4]) -> Result<(), CoreError> {
        let found = self.take(4)?;
        if found != expected {
            return Err(CoreError::BadMagic { expected });
        }
        Ok(())
    }

    pub fn get_u8(&mut self) -> Result<u8, CoreError> {
        Ok(self.take(1)?[0])
    }

    pub fn get_u32(&mut self) -> Result<u32, CoreError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().unwrap()))
    }

    pub fn get_u64(&mut self) -> Result<u64, CoreError> {
        let b = self.take(8)?;
        Ok(u64::from_le_bytes(b.try_into().unwrap()))
    }

    pub fn get_f64(&mut self) -> Result<f64, CoreError> {
        let b = self.take(8)?;
        Ok(f64::from_le_bytes(b.try_into().unwrap()))
    }

    /// Reads a u32-prefixed f64 array. The prefix is validated against the
    /// remaining byte count before the vector is allocated.
    pub fn get_f64_slice(&mut self) -> Result<Vec<f64>, CoreError> {
        let len = self.get_u32()? as usize;
        if self.remaining() < len * 8 {
            return Err(CoreError::Truncated { offset: self.pos });
        }
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(self.get_f64()?);
        }
        Ok(out)
    }

    /// Reads a u32-prefixed u32 array, with the same length validation.
    pub fn get_u32_slice(&mut self) -> Result<Vec<u32>, CoreError> {
        let len = self.get_u32()? as usize;
        if self.remaining() < len * 4 {
            return Err(CoreError::Truncated { offset: self.pos });
        }
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(self.get_u32()?);
        }
        Ok(out)
    }

    /// Fails unless every byte has been consumed; trailing garbage usually
    /// means the file was written by something else.
    pub fn finish(self) -> Result<(), CoreError> {
        if self.remaining() != 0 {
            return Err(CoreError::Malformed(format!(
                "{} trailing bytes after payload",
                self.remaining()
            )));
        }
        Ok(())
    }
}
