//! CSV and legacy-VTK export of fields.
//!
//! CSV is the canonical format: one row per node, `x1,x2,x3,value`, printed
//! with 17 significant digits so re-import reproduces every f64 bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fields::field::{ScalarField, VectorField};
use crate::fields::grid::Grid3;
use crate::geometry::SectionKind;
use crate::num::Scalar;

pub fn write_scalar_csv<F: Scalar>(field: &ScalarField<F>, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "x1,x2,x3,value")?;
    let grid = field.grid();
    let ns = grid.section().node_count();
    let nodes = grid.section().nodes();
    for (g, v) in field.data().iter().enumerate() {
        let i1 = g / ns;
        let p = nodes[g % ns];
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            grid.axial_coord(i1).as_f64(),
            p[0].as_f64(),
            p[1].as_f64(),
            v.as_f64()
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Re-import a CSV written by [`write_scalar_csv`] onto the same grid.
pub fn read_scalar_csv<F: Scalar>(grid: &Grid3<F>, path: &Path) -> Result<ScalarField<F>> {
    let r = BufReader::new(File::open(path)?);
    let mut values = Vec::with_capacity(grid.node_count());
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        if lineno == 0 {
            if line.trim() != "x1,x2,x3,value" {
                return Err(Error::Config(format!(
                    "unexpected CSV header {:?}",
                    line.trim()
                )));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let value = line
            .rsplit(',')
            .next()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Config(format!("CSV parse error at line {}", lineno + 1)))?;
        values.push(F::cst(value));
    }
    if values.len() != grid.node_count() {
        return Err(Error::Dimension(format!(
            "CSV holds {} values, grid has {} nodes",
            values.len(),
            grid.node_count()
        )));
    }
    ScalarField::from_data(grid, values)
}

/// Legacy-VTK export: structured grid for rectangle/disk sections,
/// unstructured vertices for masks. Scalars and one optional vector field.
pub fn write_vtk<F: Scalar>(
    path: &Path,
    grid: &Grid3<F>,
    scalars: &[(&str, &ScalarField<F>)],
    vector: Option<(&str, &VectorField<F>)>,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "ductflow fields")?;
    writeln!(w, "ASCII")?;
    let ns = grid.section().node_count();
    let npoints = grid.node_count();
    let structured_dims = match grid.section().kind() {
        SectionKind::Rectangle { n2, n3, .. } => Some((*n2, *n3, grid.n1())),
        SectionKind::Disk { nr, ntheta, .. } => Some((*ntheta, *nr, grid.n1())),
        SectionKind::GridMask { .. } => None,
    };
    match structured_dims {
        Some((a, b, c)) => {
            writeln!(w, "DATASET STRUCTURED_GRID")?;
            writeln!(w, "DIMENSIONS {a} {b} {c}")?;
            writeln!(w, "POINTS {npoints} double")?;
        }
        None => {
            writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
            writeln!(w, "POINTS {npoints} double")?;
        }
    }
    let nodes = grid.section().nodes();
    for g in 0..npoints {
        let i1 = g / ns;
        let p = nodes[g % ns];
        writeln!(
            w,
            "{:.16e} {:.16e} {:.16e}",
            grid.axial_coord(i1).as_f64(),
            p[0].as_f64(),
            p[1].as_f64()
        )?;
    }
    if structured_dims.is_none() {
        writeln!(w, "CELLS {npoints} {}", 2 * npoints)?;
        for g in 0..npoints {
            writeln!(w, "1 {g}")?;
        }
        writeln!(w, "CELL_TYPES {npoints}")?;
        for _ in 0..npoints {
            writeln!(w, "1")?;
        }
    }
    writeln!(w, "POINT_DATA {npoints}")?;
    for (name, field) in scalars {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for v in field.data() {
            writeln!(w, "{:.16e}", v.as_f64())?;
        }
    }
    if let Some((name, vf)) = vector {
        writeln!(w, "VECTORS {name} double")?;
        for g in 0..npoints {
            writeln!(
                w,
                "{:.16e} {:.16e} {:.16e}",
                vf.components[0].data()[g].as_f64(),
                vf.components[1].data()[g].as_f64(),
                vf.components[2].data()[g].as_f64()
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_cross_section, SectionSpec};
    use std::sync::Arc;

    fn grid() -> Grid3<f64> {
        let section = Arc::new(
            build_cross_section(&SectionSpec::Rectangle {
                width: 1.0,
                height: 1.0,
                n2: 9,
                n3: 9,
            })
            .unwrap(),
        );
        Grid3::new(1.0, 9, section).unwrap()
    }

    #[test]
    fn csv_roundtrip_is_bit_exact() {
        let g = grid();
        let f = ScalarField::from_fn(&g, |x1, p| (x1 * 17.0).sin() * (p[0] - p[1]) / 3.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field.csv");
        write_scalar_csv(&f, &path).unwrap();
        let back = read_scalar_csv(&g, &path).unwrap();
        for (a, b) in f.data().iter().zip(back.data().iter()) {
            assert_eq!(a, b, "CSV roundtrip must reproduce every bit");
        }
    }

    #[test]
    fn vtk_file_has_structured_header() {
        let g = grid();
        let f = ScalarField::constant(&g, 1.0);
        let v = VectorField::zeros(&g);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.vtk");
        write_vtk(&path, &g, &[("density", &f)], Some(("velocity", &v))).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# vtk DataFile Version 3.0"));
        assert!(text.contains("DATASET STRUCTURED_GRID"));
        assert!(text.contains("DIMENSIONS 9 9 9"));
        assert!(text.contains("SCALARS density double 1"));
        assert!(text.contains("VECTORS velocity double"));
    }
}
