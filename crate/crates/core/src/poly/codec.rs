//! Binary cache format, little-endian:
//!
//! ```text
//! "GDET" | version u16 | mode u8 | n_vars u8 | term count u64
//! mode 1 only: log2 bound on the l1 norm of the exact coefficients, f64
//! per term, ascending monomial order:
//!     n_vars exponent bytes | sign u8 | magnitude length u32 | magnitude bytes
//! CRC32 (IEEE) of every preceding byte, u32
//! ```
//!
//! Mode 0 is exact, mode 1 is residues modulo 2^61 - 1. The sign byte is 0
//! for positive and 1 for negative coefficients; zero is never stored.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_bigint::{BigInt, Sign};

use super::{CoefficientMode, Coeffs, ModQ, Monomial, SparsePoly, TermCount, MAX_VARS, MODPRIME_Q};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"GDET";
const VERSION: u16 = 1;
const HEADER_LEN: usize = 16;

/// Fields of the fixed-size header.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CacheHeader {
    pub mode: CoefficientMode,
    pub n_vars: usize,
    pub terms: u64,
    /// Present for modular files.
    pub l1_log2: Option<f64>,
}

impl CacheHeader {
    pub fn count(&self) -> TermCount {
        match self.l1_log2 {
            Some(b) => TermCount::modular(self.terms, b),
            None => TermCount::exact(self.terms),
        }
    }
}

struct CrcWriter<W> {
    inner: W,
    crc: crc32fast::Hasher,
}

impl<W: Write> Write for CrcWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.crc.update(&buf[..n]);
        Ok(n)
    }
    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

struct CrcReader<R> {
    inner: R,
    crc: crc32fast::Hasher,
}

impl<R: Read> CrcReader<R> {
    fn read_exact_crc(&mut self, buf: &mut [u8]) -> Result<()> {
        self.inner.read_exact(buf).map_err(truncated)?;
        self.crc.update(buf);
        Ok(())
    }
}

fn truncated(e: io::Error) -> Error {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        Error::Format("truncated file".into())
    } else {
        Error::Io(e)
    }
}

fn mode_tag(mode: CoefficientMode) -> u8 {
    match mode {
        CoefficientMode::Exact => 0,
        CoefficientMode::ModPrime => 1,
    }
}

/// Writes the encoding of `poly` to `out`.
pub fn write_to<W: Write>(poly: &SparsePoly, out: W) -> Result<()> {
    let mut w = CrcWriter {
        inner: out,
        crc: crc32fast::Hasher::new(),
    };
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[mode_tag(poly.mode()), poly.n_vars() as u8])?;
    w.write_all(&(poly.term_count() as u64).to_le_bytes())?;
    if poly.mode() == CoefficientMode::ModPrime {
        w.write_all(&poly.l1_log2_bound().to_le_bytes())?;
    }
    let n = poly.n_vars();
    let mut put = |m: &Monomial, negative: bool, mag: &[u8]| -> io::Result<()> {
        w.write_all(&m.raw().to_be_bytes()[..n])?;
        w.write_all(&[negative as u8])?;
        w.write_all(&(mag.len() as u32).to_le_bytes())?;
        w.write_all(mag)
    };
    let trim = |bytes: &[u8]| -> usize { bytes.iter().rposition(|&b| b != 0).map_or(0, |p| p + 1) };
    match poly.coeffs() {
        Coeffs::Wide(v) => {
            for (m, c) in poly.monomials().iter().zip(v) {
                let bytes = c.unsigned_abs().to_le_bytes();
                put(m, *c < 0, &bytes[..trim(&bytes)])?;
            }
        }
        Coeffs::Mod(v) => {
            for (m, c) in poly.monomials().iter().zip(v) {
                let bytes = c.value().to_le_bytes();
                put(m, false, &bytes[..trim(&bytes)])?;
            }
        }
        Coeffs::Big(v) => {
            for (m, c) in poly.monomials().iter().zip(v) {
                let (sign, mag) = c.to_bytes_le();
                put(m, sign == Sign::Minus, &mag)?;
            }
        }
    }
    let crc = w.crc.clone().finalize();
    w.inner.write_all(&crc.to_le_bytes())?;
    w.flush()?;
    Ok(())
}

/// Encodes `poly`; the output depends only on the polynomial.
pub fn serialize(poly: &SparsePoly) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 4 + poly.term_count() * (poly.n_vars() + 8));
    write_to(poly, &mut buf).expect("writing to memory cannot fail");
    buf
}

fn parse_header(bytes: &[u8; HEADER_LEN]) -> Result<CacheHeader> {
    if &bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let mode = match bytes[6] {
        0 => CoefficientMode::Exact,
        1 => CoefficientMode::ModPrime,
        t => return Err(Error::Format(format!("unknown coefficient mode {t}"))),
    };
    let n_vars = bytes[7] as usize;
    if n_vars > MAX_VARS {
        return Err(Error::Format(format!("{n_vars} variables exceed {MAX_VARS}")));
    }
    let terms = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
    Ok(CacheHeader {
        mode,
        n_vars,
        terms,
        l1_log2: None,
    })
}

/// Decodes a polynomial, checking magic, version, ordering and checksum.
pub fn read_from<R: Read>(input: R) -> Result<SparsePoly> {
    let mut r = CrcReader {
        inner: input,
        crc: crc32fast::Hasher::new(),
    };
    let mut head = [0u8; HEADER_LEN];
    r.read_exact_crc(&mut head)?;
    let header = parse_header(&head)?;
    let n = header.n_vars;
    let count = usize::try_from(header.terms).map_err(|_| Error::Format("term count too large".into()))?;
    let mut l1_log2 = 0.0;
    if header.mode == CoefficientMode::ModPrime {
        let mut b = [0u8; 8];
        r.read_exact_crc(&mut b)?;
        l1_log2 = parse_bound(b)?;
    }

    let mut monos: Vec<Monomial> = Vec::with_capacity(count.min(1 << 24));
    let mut wide: Vec<i128> = Vec::new();
    let mut big: Option<Vec<BigInt>> = None;
    let mut modular: Vec<ModQ> = Vec::new();
    let mut exps = [0u8; 16];
    let mut mag_buf = Vec::new();
    for _ in 0..count {
        r.read_exact_crc(&mut exps[..n])?;
        let m = Monomial::from_raw(u128::from_be_bytes(exps));
        if monos.last().is_some_and(|&last| last >= m) {
            return Err(Error::Format("terms out of order".into()));
        }
        monos.push(m);
        let mut sign_len = [0u8; 5];
        r.read_exact_crc(&mut sign_len)?;
        let negative = match sign_len[0] {
            0 => false,
            1 => true,
            s => return Err(Error::Format(format!("bad sign byte {s}"))),
        };
        let len = u32::from_le_bytes(sign_len[1..5].try_into().expect("4 bytes")) as usize;
        if len == 0 {
            return Err(Error::Format("zero coefficient stored".into()));
        }
        mag_buf.resize(len, 0);
        r.read_exact_crc(&mut mag_buf)?;
        match header.mode {
            CoefficientMode::ModPrime => {
                if negative || len > 8 {
                    return Err(Error::Format("bad modular coefficient".into()));
                }
                let mut b = [0u8; 8];
                b[..len].copy_from_slice(&mag_buf);
                let v = u64::from_le_bytes(b);
                if v == 0 || v >= MODPRIME_Q {
                    return Err(Error::Format("modular coefficient out of range".into()));
                }
                modular.push(ModQ(v));
            }
            CoefficientMode::Exact => {
                if let Some(big) = big.as_mut() {
                    let s = if negative { Sign::Minus } else { Sign::Plus };
                    big.push(BigInt::from_bytes_le(s, &mag_buf));
                    continue;
                }
                let small = (len <= 16)
                    .then(|| {
                        let mut b = [0u8; 16];
                        b[..len].copy_from_slice(&mag_buf);
                        u128::from_le_bytes(b)
                    })
                    .filter(|&v| v <= i128::MAX as u128);
                match small {
                    Some(v) => wide.push(if negative { -(v as i128) } else { v as i128 }),
                    None => {
                        let mut all: Vec<BigInt> = wide.drain(..).map(BigInt::from).collect();
                        let s = if negative { Sign::Minus } else { Sign::Plus };
                        all.push(BigInt::from_bytes_le(s, &mag_buf));
                        big = Some(all);
                    }
                }
            }
        }
    }
    let expected = r.crc.clone().finalize();
    let mut tail = [0u8; 4];
    r.inner.read_exact(&mut tail).map_err(truncated)?;
    if u32::from_le_bytes(tail) != expected {
        return Err(Error::Format("checksum mismatch".into()));
    }
    let mut extra = [0u8; 1];
    if r.inner.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after checksum".into()));
    }
    Ok(match (header.mode, big) {
        (CoefficientMode::ModPrime, _) => SparsePoly::from_sorted_mod(n, monos, modular, l1_log2),
        (CoefficientMode::Exact, Some(big)) => SparsePoly::from_sorted_big(n, monos, big),
        (CoefficientMode::Exact, None) => SparsePoly::from_sorted_wide(n, monos, wide),
    })
}

pub fn deserialize(bytes: &[u8]) -> Result<SparsePoly> {
    read_from(bytes)
}

pub fn write_file(poly: &SparsePoly, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    write_to(poly, BufWriter::with_capacity(1 << 20, file))
}

pub fn read_file(path: &Path) -> Result<SparsePoly> {
    read_from(BufReader::with_capacity(1 << 20, File::open(path)?))
}

fn parse_bound(b: [u8; 8]) -> Result<f64> {
    let v = f64::from_le_bytes(b);
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::Format("bad l1 bound".into()))
    }
}

/// Reads only the header, plus the l1 bound of modular files.
pub fn read_header(path: &Path) -> Result<CacheHeader> {
    let mut file = File::open(path)?;
    let mut head = [0u8; HEADER_LEN];
    file.read_exact(&mut head).map_err(truncated)?;
    let mut header = parse_header(&head)?;
    if header.mode == CoefficientMode::ModPrime {
        let mut b = [0u8; 8];
        file.read_exact(&mut b).map_err(truncated)?;
        header.l1_log2 = Some(parse_bound(b)?);
    }
    Ok(header)
}

/// Checks the checksum of a cache file without decoding its terms.
pub fn verify_file(path: &Path) -> Result<CacheHeader> {
    let header = read_header(path)?;
    let mut file = File::open(path)?;
    let len = file.metadata()?.len();
    if len < (HEADER_LEN + 4) as u64 {
        return Err(Error::Format("truncated file".into()));
    }
    let mut body = (&mut file).take(len - 4);
    let mut crc = crc32fast::Hasher::new();
    let mut buf = vec![0u8; 1 << 20];
    loop {
        let n = body.read(&mut buf)?;
        if n == 0 {
            break;
        }
        crc.update(&buf[..n]);
    }
    let mut tail = [0u8; 4];
    file.read_exact(&mut tail).map_err(truncated)?;
    if crc.finalize() != u32::from_le_bytes(tail) {
        return Err(Error::Format("checksum mismatch".into()));
    }
    Ok(header)
}
