//! Simple mesh generators for plates, discs and spheres.

use std::collections::HashMap;
use std::f64::consts::TAU;

use nalgebra::Vector3;

use super::{Point3, TriangleMesh};

/// Parallelogram `origin + s·u + t·v`, `s, t ∈ [0, 1]`, split into `nu × nv`
/// cells of two triangles each. Normals follow `u × v`.
pub fn rectangle(origin: Point3, u: Point3, v: Point3, nu: usize, nv: usize) -> TriangleMesh {
    let (nu, nv) = (nu.max(1), nv.max(1));
    let mut vertices = Vec::with_capacity((nu + 1) * (nv + 1));
    for j in 0..=nv {
        for i in 0..=nu {
            vertices.push(origin + u * (i as f64 / nu as f64) + v * (j as f64 / nv as f64));
        }
    }
    let idx = |i: usize, j: usize| j * (nu + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nu * nv);
    for j in 0..nv {
        for i in 0..nu {
            triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            triangles.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    TriangleMesh::new(vertices, triangles).expect("rectangle mesh requires non-parallel edges")
}

/// Flat disc of the given radius, meshed with concentric rings of spacing
/// at most `h`. Triangles are oriented along `normal`.
pub fn disc(center: Point3, normal: Point3, radius: f64, h: f64) -> TriangleMesh {
    let n = normal.normalize();
    let helper = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = n.cross(&helper).normalize();
    let e2 = n.cross(&e1);
    let rings = (radius / h).ceil().max(1.0) as usize;
    let mut vertices = vec![center];
    let mut ring_start = vec![0usize];
    for i in 1..=rings {
        ring_start.push(vertices.len());
        let r = radius * i as f64 / rings as f64;
        let m = 6 * i;
        for k in 0..m {
            let a = TAU * k as f64 / m as f64;
            vertices.push(center + (e1 * a.cos() + e2 * a.sin()) * r);
        }
    }
    let mut triangles = Vec::new();
    for i in 1..=rings {
        let (inner_n, outer_n) = (if i == 1 { 1 } else { 6 * (i - 1) }, 6 * i);
        let (inner0, outer0) = (ring_start[i - 1], ring_start[i]);
        if i == 1 {
            for k in 0..outer_n {
                triangles.push([0, outer0 + k, outer0 + (k + 1) % outer_n]);
            }
            continue;
        }
        // Zipper: advance whichever ring has the smaller next angle.
        let (mut a, mut b) = (0usize, 0usize);
        while a < inner_n || b < outer_n {
            let next_inner = (a + 1) as f64 / inner_n as f64;
            let next_outer = (b + 1) as f64 / outer_n as f64;
            let ia = inner0 + a % inner_n;
            let ob = outer0 + b % outer_n;
            if b < outer_n && (a >= inner_n || next_outer <= next_inner) {
                triangles.push([ia, ob, outer0 + (b + 1) % outer_n]);
                b += 1;
            } else {
                triangles.push([ia, ob, inner0 + (a + 1) % inner_n]);
                a += 1;
            }
        }
    }
    for t in &mut triangles {
        let c = (vertices[t[1]] - vertices[t[0]]).cross(&(vertices[t[2]] - vertices[t[0]]));
        if c.dot(&n) < 0.0 {
            t.swap(1, 2);
        }
    }
    TriangleMesh::new(vertices, triangles).expect("disc mesh requires positive radius")
}

/// Geodesic sphere from a subdivided icosahedron, outward normals.
pub fn icosphere(center: Point3, radius: f64, subdivisions: usize) -> TriangleMesh {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let mut unit: Vec<Point3> = [
        [-1.0, p, 0.0],
        [1.0, p, 0.0],
        [-1.0, -p, 0.0],
        [1.0, -p, 0.0],
        [0.0, -1.0, p],
        [0.0, 1.0, p],
        [0.0, -1.0, -p],
        [0.0, 1.0, -p],
        [p, 0.0, -1.0],
        [p, 0.0, 1.0],
        [-p, 0.0, -1.0],
        [-p, 0.0, 1.0],
    ]
    .iter()
    .map(|v| Vector3::new(v[0], v[1], v[2]).normalize())
    .collect();
    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Point3>| {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) / 2.0).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for t in &triangles {
            let ab = mid(t[0], t[1], &mut unit);
            let bc = mid(t[1], t[2], &mut unit);
            let ca = mid(t[2], t[0], &mut unit);
            next.push([t[0], ab, ca]);
            next.push([t[1], bc, ab]);
            next.push([t[2], ca, bc]);
            next.push([ab, bc, ca]);
        }
        triangles = next;
    }
    let vertices = unit.iter().map(|v| center + v * radius).collect();
    TriangleMesh::new(vertices, triangles).expect("icosphere requires positive radius")
}
