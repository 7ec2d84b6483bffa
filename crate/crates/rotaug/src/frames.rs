use std::path::{Path, PathBuf};

use crate::error::RunError;

const IMAGE_EXTENSIONS: [&str; 4] = ["png", "jpg", "jpeg", "bmp"];

/// Ordered frame paths from a directory of images (sorted by file name) or a
/// list file with one path per line (relative paths resolve against the list's
/// directory; blank lines and `#` comments are skipped).
pub fn list_frames(source: &Path) -> Result<Vec<PathBuf>, RunError> {
    let frames = if source.is_dir() {
        let mut paths = Vec::new();
        for entry in std::fs::read_dir(source).map_err(|e| RunError::io(source, e))? {
            let path = entry.map_err(|e| RunError::io(source, e))?.path();
            let is_image = path
                .extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()));
            if is_image && path.is_file() {
                paths.push(path);
            }
        }
        paths.sort();
        paths
    } else {
        let text = std::fs::read_to_string(source).map_err(|e| RunError::io(source, e))?;
        let base = source.parent().unwrap_or(Path::new("."));
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let p = PathBuf::from(l);
                if p.is_absolute() { p } else { base.join(p) }
            })
            .collect()
    };
    if frames.is_empty() {
        return Err(RunError::Usage(format!("no frames found in {}", source.display())));
    }
    Ok(frames)
}
