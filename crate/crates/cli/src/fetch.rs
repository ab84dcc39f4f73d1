//! Download of per-site dump archives.
//!
//! The archive is streamed into a temporary file next to its destination
//! and renamed into place only after the byte count matches the server's
//! `Content-Length`. A failed or interrupted transfer leaves nothing behind.

use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

pub const DEFAULT_ARCHIVE_BASE: &str = "https://archive.org/download/stackexchange";
pub const ARCHIVE_BASE_ENV: &str = "QRNET_ARCHIVE_BASE";

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("invalid site slug {0:?}: expected [a-z0-9.]+")]
    InvalidSlug(String),
    #[error("archive not found (HTTP 404): {0}")]
    NotFound(String),
    #[error("HTTP status {status} for {url}")]
    Status { status: u16, url: String },
    #[error("network error for {url}: {message}")]
    Network { url: String, message: String },
    #[error("length mismatch: server announced {expected} bytes, received {received}")]
    LengthMismatch { expected: u64, received: u64 },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchedArchive {
    pub path: PathBuf,
    pub content_length: u64,
}

pub fn validate_slug(slug: &str) -> Result<(), FetchError> {
    let ok = !slug.is_empty()
        && slug
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'.');
    if ok {
        Ok(())
    } else {
        Err(FetchError::InvalidSlug(slug.to_string()))
    }
}

/// Base URL from `QRNET_ARCHIVE_BASE`, else the public archive.
pub fn archive_base() -> String {
    std::env::var(ARCHIVE_BASE_ENV).unwrap_or_else(|_| DEFAULT_ARCHIVE_BASE.to_string())
}

pub fn archive_url(base: &str, slug: &str) -> String {
    format!("{}/{slug}.7z", base.trim_end_matches('/'))
}

/// Downloads `<slug>.7z` into the directory `destination`.
pub fn fetch_dump(slug: &str, destination: &Path) -> Result<FetchedArchive, FetchError> {
    fetch_dump_from(&archive_base(), slug, destination)
}

pub fn fetch_dump_from(
    base: &str,
    slug: &str,
    destination: &Path,
) -> Result<FetchedArchive, FetchError> {
    validate_slug(slug)?;
    let url = archive_url(base, slug);
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| FetchError::Io { path, source }
    };
    std::fs::create_dir_all(destination).map_err(io_err(destination))?;
    let target = destination.join(format!("{slug}.7z"));

    let response = match ureq::get(&url).call() {
        Ok(response) => response,
        Err(ureq::Error::StatusCode(404)) => return Err(FetchError::NotFound(url)),
        Err(ureq::Error::StatusCode(status)) => return Err(FetchError::Status { status, url }),
        Err(e) => {
            return Err(FetchError::Network {
                url,
                message: e.to_string(),
            })
        }
    };
    let expected = response
        .headers()
        .get("content-length")
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.trim().parse::<u64>().ok());

    let partial = tempfile::Builder::new()
        .prefix(&format!(".{slug}."))
        .suffix(".part")
        .tempfile_in(destination)
        .map_err(io_err(destination))?;
    let mut body = response.into_body().into_reader();
    let mut writer = BufWriter::new(partial);
    let mut chunk = vec![0u8; 1 << 16];
    let mut received = 0u64;
    loop {
        let n = match body.read(&mut chunk) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => {
                return Err(FetchError::Network {
                    url,
                    message: e.to_string(),
                })
            }
        };
        writer.write_all(&chunk[..n]).map_err(io_err(&target))?;
        received += n as u64;
    }
    writer.flush().map_err(io_err(&target))?;
    if let Some(expected) = expected {
        if expected != received {
            return Err(FetchError::LengthMismatch { expected, received });
        }
    }
    let partial = writer.into_inner().map_err(|e| FetchError::Io {
        path: target.clone(),
        source: e.into_error(),
    })?;
    partial.as_file().sync_all().map_err(io_err(&target))?;
    partial.persist(&target).map_err(|e| FetchError::Io {
        path: target.clone(),
        source: e.error,
    })?;
    Ok(FetchedArchive {
        path: target,
        content_length: received,
    })
}
