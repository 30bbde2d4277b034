//! Mutual shadow area as a surface integral over two triangle meshes.

use crate::error::{Error, Result};
use crate::geometry::{Shape3, TriangleMesh};
use crate::par;

use super::{Parts, Region};

fn meshes(region: &Region) -> Result<Vec<&TriangleMesh>> {
    let Parts::Spatial(parts) = region.parts() else {
        return Err(Error::DimensionMismatch(format!("region {} is not spatial", region.label())));
    };
    parts
        .iter()
        .map(|p| match p {
            Shape3::Mesh(m) => Ok(m),
            _ => Err(Error::InvalidArgument(format!(
                "surface integral needs triangle meshes; region {} has another shape",
                region.label()
            ))),
        })
        .collect()
}

struct Panel {
    centroid: nalgebra::Vector3<f64>,
    normal: nalgebra::Vector3<f64>,
    /// Area divided by the part's ray-crossing count.
    weighted_area: f64,
    diameter: f64,
}

fn panels(region: &Region) -> Result<Vec<Panel>> {
    let mut out = Vec::new();
    for m in meshes(region)? {
        let xi = f64::from(m.crossings());
        for i in 0..m.triangles().len() {
            out.push(Panel {
                centroid: m.triangle_centroid(i),
                normal: m.normals()[i],
                weighted_area: m.areas()[i] / xi,
                diameter: m.triangle_diameter(i),
            });
        }
    }
    Ok(out)
}

/// `A_TR = ∫∫ |n̂_T·R| |n̂_R·R| / (ξ_T ξ_R |R|⁴) dS_R dS_T`, `R = r_R − r_T`,
/// with one centroid node per panel pair.
///
/// The kernel counts every line through both surfaces once per crossing, so
/// dividing by the crossing counts `ξ` (2 for closed convex meshes, 1 for open
/// patches) leaves each transmitter-to-receiver ray counted once.
pub fn mesh_mutual_shadow(t: &Region, r: &Region) -> Result<f64> {
    let tp = panels(t)?;
    let rp = panels(r)?;
    let rows = par::map_range(tp.len(), |i| {
        let a = &tp[i];
        let mut acc = 0.0;
        for b in &rp {
            let rv = b.centroid - a.centroid;
            let dist2 = rv.norm_squared();
            let diameter = a.diameter.max(b.diameter);
            if dist2 < 4.0 * diameter * diameter {
                return Err(Error::PanelsTooClose { distance: dist2.sqrt(), diameter });
            }
            acc += a.normal.dot(&rv).abs() * b.normal.dot(&rv).abs() / (dist2 * dist2) * b.weighted_area;
        }
        Ok(acc * a.weighted_area)
    });
    let rows: Vec<f64> = rows.into_iter().collect::<Result<_>>()?;
    Ok(par::ordered_sum(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::mesh;
    use nalgebra::Vector3;

    #[test]
    fn distant_plates_approach_paraxial() {
        let plate = |z: f64| {
            Shape3::Mesh(mesh::rectangle(Vector3::new(-0.5, -0.5, z), Vector3::x(), Vector3::y(), 8, 8))
        };
        let t = Region::spatial("T", vec![plate(0.0)]).unwrap();
        let r = Region::spatial("R", vec![plate(50.0)]).unwrap();
        let a = mesh_mutual_shadow(&t, &r).unwrap();
        assert!((a * 2500.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn close_panels_are_rejected() {
        let t = Region::spatial("T", vec![Shape3::Mesh(mesh::rectangle(Vector3::zeros(), Vector3::x(), Vector3::y(), 2, 2))])
            .unwrap();
        let r = Region::spatial(
            "R",
            vec![Shape3::Mesh(mesh::rectangle(Vector3::new(0.0, 0.0, 0.1), Vector3::x(), Vector3::y(), 2, 2))],
        )
        .unwrap();
        assert!(matches!(mesh_mutual_shadow(&t, &r), Err(Error::PanelsTooClose { .. })));
    }

    #[test]
    fn non_mesh_parts_are_rejected() {
        let t = Region::spatial("T", vec![Shape3::sphere([0.0; 3], 1.0).unwrap()]).unwrap();
        assert!(mesh_mutual_shadow(&t, &t).is_err());
    }
}
