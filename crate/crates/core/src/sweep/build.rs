use std::fs;
use std::io;
use std::os::unix::process::CommandExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::config::{Project, Toolchain, FLAGS_PLACEHOLDER};

/// Remark switches appended to every build so decisions can be parsed.
pub const REMARK_FLAGS: [&str; 3] = ["-Rpass=inline", "-Rpass-missed=inline", "-Rpass-analysis=inline"];

const POLL: Duration = Duration::from_millis(20);
const TAIL_LINES: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("compiler '{0}' not found")]
    CompilerNotFound(String),
    #[error("source directory {0} does not exist")]
    MissingSource(PathBuf),
    #[error("build exited with {code:?}:\n{stderr_tail}")]
    Failed { code: Option<i32>, stderr_tail: String },
    #[error("build exceeded {seconds}s")]
    Timeout { seconds: f64 },
    #[error("no file matches '{0}'")]
    ArtifactMissing(String),
    #[error("{0}")]
    Io(String),
}

impl From<io::Error> for BuildError {
    fn from(e: io::Error) -> Self {
        BuildError::Io(e.to_string())
    }
}

/// A finished build. The work directory is deleted when this is dropped.
#[derive(Debug)]
pub struct BuildArtifacts {
    pub project: String,
    pub work_dir: tempfile::TempDir,
    /// Matched files, sorted by path.
    pub binaries: Vec<PathBuf>,
    /// Standard error followed by standard output; link-time remarks go to
    /// the latter.
    pub diagnostics: String,
    pub compile_seconds: f64,
}

impl BuildArtifacts {
    pub fn relative(&self, path: &Path) -> String {
        path.strip_prefix(self.work_dir.path())
            .unwrap_or(path)
            .display()
            .to_string()
    }
}

/// Absolute path of `compiler`, searching `PATH` for bare names.
pub fn resolve_compiler(compiler: &str) -> Result<PathBuf, BuildError> {
    let found = if compiler.contains('/') {
        Some(PathBuf::from(compiler)).filter(|p| p.is_file())
    } else {
        std::env::var_os("PATH").and_then(|paths| {
            std::env::split_paths(&paths)
                .map(|d| d.join(compiler))
                .find(|p| p.is_file())
        })
    };
    found.ok_or_else(|| BuildError::CompilerNotFound(compiler.to_string()))
}

pub fn shell_quote(s: &str) -> String {
    let safe = |c: char| c.is_ascii_alphanumeric() || "-_=+.,/:@%".contains(c);
    if !s.is_empty() && s.chars().all(safe) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

/// The shell command for one build.
pub fn render_command(project: &Project, compiler: &Path, flags: &[String], remarks: bool) -> String {
    let mut all: Vec<String> = flags.iter().map(|f| shell_quote(f)).collect();
    if remarks {
        all.extend(REMARK_FLAGS.iter().map(|f| f.to_string()));
    }
    project
        .build_command_template
        .replace(FLAGS_PLACEHOLDER, &all.join(" "))
        .replace("{CC}", &shell_quote(&compiler.display().to_string()))
}

fn copy_tree(from: &Path, to: &Path) -> io::Result<()> {
    fs::create_dir_all(to)?;
    for entry in fs::read_dir(from)? {
        let entry = entry?;
        let target = to.join(entry.file_name());
        if entry.file_type()?.is_dir() {
            copy_tree(&entry.path(), &target)?;
        } else {
            fs::copy(entry.path(), &target)?;
        }
    }
    Ok(())
}

fn tail(text: &str) -> String {
    let lines: Vec<&str> = text.lines().collect();
    lines[lines.len().saturating_sub(TAIL_LINES)..].join("\n")
}

/// Copies the project into a fresh directory, runs its build command with
/// `flags` (plus the remark switches), and collects the artifacts.
pub fn build_variant(
    project: &Project,
    flags: &[String],
    toolchain: &Toolchain,
    timeout: Duration,
) -> Result<BuildArtifacts, BuildError> {
    let compiler = resolve_compiler(&toolchain.compiler_path)?;
    if !project.source_dir.is_dir() {
        return Err(BuildError::MissingSource(project.source_dir.clone()));
    }
    let work_dir = tempfile::Builder::new().prefix("inlinescope-build-").tempdir()?;
    copy_tree(&project.source_dir, work_dir.path())?;
    let logs = tempfile::Builder::new().prefix("inlinescope-log-").tempdir()?;
    let err_path = logs.path().join("stderr");
    let out_path = logs.path().join("stdout");

    let command = render_command(project, &compiler, flags, true);
    log::debug!("[{}] {command}", project.name);
    let started = Instant::now();
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .current_dir(work_dir.path())
        .env("CC", &compiler)
        .envs(&toolchain.extra_env)
        .stdin(Stdio::null())
        .stdout(fs::File::create(&out_path)?)
        .stderr(fs::File::create(&err_path)?)
        .process_group(0)
        .spawn()?;
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if started.elapsed() >= timeout {
            // SAFETY: kill(2) on the child's own process group.
            unsafe {
                libc::kill(-(child.id() as i32), libc::SIGKILL);
            }
            let _ = child.wait();
            return Err(BuildError::Timeout {
                seconds: timeout.as_secs_f64(),
            });
        }
        std::thread::sleep(POLL);
    };
    let compile_seconds = started.elapsed().as_secs_f64();
    let stderr = String::from_utf8_lossy(&fs::read(&err_path)?).into_owned();
    let stdout = String::from_utf8_lossy(&fs::read(&out_path)?).into_owned();
    if !status.success() {
        return Err(BuildError::Failed {
            code: status.code(),
            stderr_tail: tail(&stderr),
        });
    }

    let pattern = work_dir.path().join(&project.artifact_glob);
    let mut binaries: Vec<PathBuf> = glob::glob(&pattern.to_string_lossy())
        .map_err(|e| BuildError::Io(e.to_string()))?
        .filter_map(|p| p.ok())
        .filter(|p| p.is_file())
        .collect();
    binaries.sort();
    if binaries.is_empty() {
        return Err(BuildError::ArtifactMissing(project.artifact_glob.clone()));
    }
    let mut diagnostics = stderr;
    diagnostics.push_str(&stdout);
    Ok(BuildArtifacts {
        project: project.name.clone(),
        work_dir,
        binaries,
        diagnostics,
        compile_seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project(dir: &Path, template: &str, glob: &str) -> Project {
        Project {
            name: "t".into(),
            source_dir: dir.to_path_buf(),
            build_command_template: template.into(),
            artifact_glob: glob.into(),
        }
    }

    fn shell() -> Toolchain {
        Toolchain {
            compiler_path: "sh".into(),
            extra_env: [("GREETING".to_string(), "hi".to_string())].into(),
        }
    }

    #[test]
    fn quoting() {
        assert_eq!(shell_quote("-O2"), "-O2");
        assert_eq!(shell_quote("a b"), "'a b'");
        assert_eq!(shell_quote("it's"), r"'it'\''s'");
    }

    #[test]
    fn runs_in_a_private_copy() {
        let src = tempfile::tempdir().unwrap();
        fs::write(src.path().join("in.txt"), "x").unwrap();
        let p = project(
            src.path(),
            "echo {FLAGS} $GREETING > out.bin; cat in.txt >> out.bin",
            "*.bin",
        );
        let a = build_variant(&p, &["-O2".into()], &shell(), Duration::from_secs(10)).unwrap();
        assert_ne!(a.work_dir.path(), src.path());
        let text = fs::read_to_string(&a.binaries[0]).unwrap();
        assert!(text.starts_with("-O2 -Rpass=inline -Rpass-missed=inline -Rpass-analysis=inline hi"));
        assert!(!src.path().join("out.bin").exists());
        assert_eq!(a.relative(&a.binaries[0]), "out.bin");
    }

    #[test]
    fn failure_modes() {
        let src = tempfile::tempdir().unwrap();
        let missing = Toolchain {
            compiler_path: "/nonexistent/cc".into(),
            extra_env: Default::default(),
        };
        let p = project(src.path(), "true {FLAGS}", "x");
        assert!(matches!(
            build_variant(&p, &[], &missing, Duration::from_secs(1)),
            Err(BuildError::CompilerNotFound(_))
        ));
        let fail = project(src.path(), "echo boom >&2; exit 3 {FLAGS}", "x");
        match build_variant(&fail, &[], &shell(), Duration::from_secs(5)) {
            Err(BuildError::Failed { code, stderr_tail }) => {
                assert_eq!(code, Some(3));
                assert_eq!(stderr_tail, "boom");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            build_variant(&p, &[], &shell(), Duration::from_secs(5)),
            Err(BuildError::ArtifactMissing(_))
        ));
        let slow = project(src.path(), "sleep 30 # {FLAGS}", "x");
        let t = Instant::now();
        assert!(matches!(
            build_variant(&slow, &[], &shell(), Duration::from_millis(300)),
            Err(BuildError::Timeout { .. })
        ));
        assert!(t.elapsed() < Duration::from_secs(5));
    }
}
