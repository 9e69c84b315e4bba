use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use mp_robust_core::Result;
use tempfile::NamedTempFile;

/// Writes `dir/name` by filling a temp file in the same directory and
/// renaming it into place.
pub fn write_atomic<F>(dir: &Path, name: &str, fill: F) -> Result<PathBuf>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    std::fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.persist(&target).map_err(|e| e.error)?;
    log::info!("wrote {}", target.display());
    Ok(target)
}
