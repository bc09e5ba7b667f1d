use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// One file a command produces.
pub struct Artifact {
    pub name: String,
    pub body: String,
    pub json: bool,
}

impl Artifact {
    pub fn json(name: impl Into<String>, body: String) -> Self {
        Artifact {
            name: name.into(),
            body,
            json: true,
        }
    }

    pub fn text(name: impl Into<String>, body: String) -> Self {
        Artifact {
            name: name.into(),
            body,
            json: false,
        }
    }
}

/// Replaces `path` with `body` via a sibling temp file and rename.
pub fn write_atomic(path: &Path, body: &str) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Writes artifacts under `out`, or prints them when no directory is given.
pub fn emit(artifacts: &[Artifact], out: Option<&Path>, json: bool) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    let io = |e: std::io::Error| CliError::Io(format!("stdout: {e}"));
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            let mut written: Vec<PathBuf> = Vec::new();
            for a in artifacts {
                let path = dir.join(&a.name);
                write_atomic(&path, &a.body)?;
                log::info!("wrote {}", path.display());
                written.push(path);
            }
            if json {
                let list: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
                writeln!(w, "{}", serde_json::json!({ "written": list })).map_err(io)?;
            } else {
                for p in &written {
                    writeln!(w, "{}", p.display()).map_err(io)?;
                }
            }
        }
        None if artifacts.len() == 1 => w.write_all(artifacts[0].body.as_bytes()).map_err(io)?,
        None if json => {
            // Embeds JSON bodies verbatim so number formatting survives.
            let parts: Vec<String> = artifacts
                .iter()
                .map(|a| {
                    let key = serde_json::to_string(&a.name).expect("string serializes");
                    let value = if a.json {
                        a.body.trim_end().to_string()
                    } else {
                        serde_json::to_string(&a.body).expect("string serializes")
                    };
                    format!("{key}: {value}")
                })
                .collect();
            writeln!(w, "{{\n{}\n}}", parts.join(",\n")).map_err(io)?;
        }
        None => {
            for a in artifacts {
                writeln!(w, "==> {} <==", a.name).map_err(io)?;
                w.write_all(a.body.as_bytes()).map_err(io)?;
            }
        }
    }
    Ok(())
}
