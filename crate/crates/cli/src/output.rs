use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Writes the whole document to `path` through a sibling temporary file and
/// a rename, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
        Some(path) => {
            let name = path.file_name().ok_or_else(|| {
                io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name")
            })?;
            let mut tmp_name = name.to_os_string();
            tmp_name.push(".partial");
            let tmp = path.with_file_name(tmp_name);
            let result = fs::write(&tmp, text).and_then(|_| fs::rename(&tmp, path));
            if result.is_err() {
                let _ = fs::remove_file(&tmp);
            }
            result
        }
    }
}
