//! Regenerates the ARFF files under `fixtures/` from the seeded in-memory
//! fixtures. Run from the workspace root:
//!
//! ```bash
//! cargo run -p pipecheck-core --example gen_fixtures
//! ```

use std::path::Path;

use pipecheck_core::dataset::write_arff;
use pipecheck_core::fixtures;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&dir)?;
    for dataset in fixtures::builtin() {
        let path = dir.join(format!("{}.arff", dataset.name()));
        std::fs::write(&path, write_arff(&dataset))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
