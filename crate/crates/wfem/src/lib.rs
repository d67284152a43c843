//! File formats, configuration and command implementations around `wfem-core`.

pub mod config;
pub mod io;

use std::path::Path;

use anyhow::Result;
use wfem_core::assembly::Discretization;
use wfem_core::benchmark::{exact, StudyConfig};
use wfem_core::mesh;
use wfem_core::picard;

/// Writes the mesh and the constrained first Picard system (linearised about
/// zero) of one level: `mesh.txt`, `A.mtx`, `B1.mtx`, `B2.mtx`.
pub fn dump_level(config: &StudyConfig, h: f64, dir: &Path) -> Result<()> {
    let case = config.case()?;
    let fine = mesh::build_mesh(&mesh::build_domain(config.m)?, h)?;
    std::fs::create_dir_all(dir)?;
    io::write_mesh(&dir.join("mesh.txt"), &io::MeshText::from(&fine))?;
    let d = Discretization::new(fine, config.params(), &config.quadrature)?;
    let sys = picard::linearized_system(
        &d,
        &vec![0.0; d.velocity_len()],
        |x| exact::manufactured_f(&case, x),
        |x| Ok(exact::exact_velocity(&case, x)),
    )?;
    io::write_matrix_market(&dir.join("A.mtx"), &sys.a)?;
    io::write_matrix_market(&dir.join("B1.mtx"), &sys.b1)?;
    io::write_matrix_market(&dir.join("B2.mtx"), &sys.b2)?;
    Ok(())
}
