use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use itdendro::{Error, Result};

/// Writes `node,cluster,root` rows, one per node.
pub fn write_assignment_csv<W: Write>(mut w: W, cluster_of: &[usize], roots: &[usize]) -> io::Result<()> {
    writeln!(w, "node,cluster,root")?;
    for (node, &c) in cluster_of.iter().enumerate() {
        writeln!(w, "{node},{c},{}", roots[c])?;
    }
    w.flush()
}

/// Creates the file and any missing parent directories.
pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::file(path, e))?))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = create(path)?;
    f.write_all(text.as_bytes())?;
    f.flush()?;
    Ok(())
}

/// Smallest member of each cluster, for partitions that have no in-tree root.
pub fn representatives(cluster_of: &[usize]) -> Vec<usize> {
    let k = cluster_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; k];
    for (i, &c) in cluster_of.iter().enumerate() {
        rep[c] = rep[c].min(i);
    }
    rep
}
