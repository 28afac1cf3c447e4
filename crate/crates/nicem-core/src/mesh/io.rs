//! Mesh serialization: the `nicem-mesh v1` text format and VTK legacy ASCII
//! export for visualization.

use super::{BoundaryEdge, DecomposedMesh, EdgeTag, Interface, Rect, SubdomainMesh};
use crate::error::{CoreError, Result};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

/// Write a decomposition in the `nicem-mesh v1` text format.
pub fn write_text<W: Write>(mesh: &DecomposedMesh, out: &mut W) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "nicem-mesh v1").unwrap();
    writeln!(
        s,
        "domain {} {} {} {}",
        mesh.domain.xmin, mesh.domain.ymin, mesh.domain.xmax, mesh.domain.ymax
    )
    .unwrap();
    writeln!(
        s,
        "subdomains {} interfaces {}",
        mesh.subdomains.len(),
        mesh.interfaces.len()
    )
    .unwrap();
    for sub in &mesh.subdomains {
        writeln!(s, "subdomain {}", sub.subdomain_id).unwrap();
        writeln!(s, "vertices {}", sub.vertices.len()).unwrap();
        for v in &sub.vertices {
            writeln!(s, "{} {}", v[0], v[1]).unwrap();
        }
        writeln!(s, "triangles {}", sub.triangles.len()).unwrap();
        for t in &sub.triangles {
            writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
        }
        writeln!(s, "boundary_edges {}", sub.boundary_edges.len()).unwrap();
        for e in &sub.boundary_edges {
            match e.tag {
                EdgeTag::Exterior => {
                    writeln!(s, "{} {} exterior", e.vertices[0], e.vertices[1]).unwrap()
                }
                EdgeTag::Interface(id) => {
                    writeln!(s, "{} {} interface {}", e.vertices[0], e.vertices[1], id).unwrap()
                }
            }
        }
    }
    for itf in &mesh.interfaces {
        writeln!(
            s,
            "interface {} between {} {}",
            itf.id, itf.subdomains.0, itf.subdomains.1
        )
        .unwrap();
        writeln!(
            s,
            "endpoints {} {} {} {}",
            itf.start[0], itf.start[1], itf.end[0], itf.end[1]
        )
        .unwrap();
        for chain in &itf.chains {
            write!(s, "chain {}", chain.len()).unwrap();
            for v in chain {
                write!(s, " {v}").unwrap();
            }
            writeln!(s).unwrap();
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Read a decomposition written by [`write_text`].
pub fn read_text<R: BufRead>(input: R) -> Result<DecomposedMesh> {
    let mut lines = input.lines();
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| CoreError::Format("unexpected end of file".into()))?
            .map_err(CoreError::Io)
    };
    let header = next()?;
    if header.trim() != "nicem-mesh v1" {
        return Err(CoreError::Format(format!("bad header: {header:?}")));
    }
    let domain_line = next()?;
    let dom: Vec<f64> = parse_fields(&domain_line, "domain")?;
    if dom.len() != 4 {
        return Err(CoreError::Format("domain needs 4 coordinates".into()));
    }
    let counts_line = next()?;
    let counts = counts_line.split_whitespace().collect::<Vec<_>>();
    if counts.len() != 4 || counts[0] != "subdomains" || counts[2] != "interfaces" {
        return Err(CoreError::Format(format!(
            "bad counts line: {counts_line:?}"
        )));
    }
    let n_sub: usize = parse_num(counts[1])?;
    let n_itf: usize = parse_num(counts[3])?;

    let mut subdomains = Vec::with_capacity(n_sub);
    for _ in 0..n_sub {
        let id: usize = parse_fields::<usize>(&next()?, "subdomain")?[0];
        let nv: usize = parse_fields::<usize>(&next()?, "vertices")?[0];
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let xy: Vec<f64> = parse_all(&next()?)?;
            vertices.push([xy[0], xy[1]]);
        }
        let nt: usize = parse_fields::<usize>(&next()?, "triangles")?[0];
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let t: Vec<usize> = parse_all(&next()?)?;
            triangles.push([t[0], t[1], t[2]]);
        }
        let nb: usize = parse_fields::<usize>(&next()?, "boundary_edges")?[0];
        let mut boundary_edges = Vec::with_capacity(nb);
        for _ in 0..nb {
            let line = next()?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            let tag = match parts.get(2) {
                Some(&"exterior") => EdgeTag::Exterior,
                Some(&"interface") => EdgeTag::Interface(parse_num(parts[3])?),
                _ => return Err(CoreError::Format(format!("bad edge line: {line:?}"))),
            };
            boundary_edges.push(BoundaryEdge {
                vertices: [parse_num(parts[0])?, parse_num(parts[1])?],
                tag,
            });
        }
        subdomains.push(SubdomainMesh {
            subdomain_id: id,
            vertices,
            triangles,
            boundary_edges,
        });
    }
    let mut interfaces = Vec::with_capacity(n_itf);
    for _ in 0..n_itf {
        let line = next()?;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 5 || parts[0] != "interface" || parts[2] != "between" {
            return Err(CoreError::Format(format!("bad interface line: {line:?}")));
        }
        let id = parse_num(parts[1])?;
        let subs = (parse_num(parts[3])?, parse_num(parts[4])?);
        let ep: Vec<f64> = parse_fields(&next()?, "endpoints")?;
        let mut chains = [Vec::new(), Vec::new()];
        for chain in &mut chains {
            let line = next()?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            let n: usize = parse_num(parts[1])?;
            *chain = parts[2..2 + n]
                .iter()
                .map(|s| parse_num(s))
                .collect::<Result<Vec<usize>>>()?;
        }
        interfaces.push(Interface {
            id,
            subdomains: subs,
            start: [ep[0], ep[1]],
            end: [ep[2], ep[3]],
            chains,
        });
    }
    let mesh = DecomposedMesh {
        domain: Rect::new(dom[0], dom[1], dom[2], dom[3]),
        subdomains,
        interfaces,
    };
    mesh.validate()?;
    Ok(mesh)
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| CoreError::Format(format!("cannot parse {s:?}")))
}

fn parse_fields<T: std::str::FromStr>(line: &str, keyword: &str) -> Result<Vec<T>> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(CoreError::Format(format!(
            "expected {keyword:?} in line {line:?}"
        )));
    }
    parts.map(parse_num).collect()
}

fn parse_all<T: std::str::FromStr>(line: &str) -> Result<Vec<T>> {
    line.split_whitespace().map(parse_num).collect()
}

/// Write all subdomains into one VTK legacy ASCII unstructured grid. When
/// point data is given it must hold one vector of vertex values per
/// subdomain (higher-order coefficients are not exported).
pub fn write_vtk<W: Write>(
    mesh: &DecomposedMesh,
    point_data: Option<(&str, &[Vec<f64>])>,
    out: &mut W,
) -> Result<()> {
    let total_pts: usize = mesh.subdomains.iter().map(|s| s.vertices.len()).sum();
    let total_tris: usize = mesh.subdomains.iter().map(|s| s.triangles.len()).sum();
    let mut s = String::new();
    writeln!(s, "# vtk DataFile Version 3.0").unwrap();
    writeln!(s, "nicem decomposition").unwrap();
    writeln!(s, "ASCII").unwrap();
    writeln!(s, "DATASET UNSTRUCTURED_GRID").unwrap();
    writeln!(s, "POINTS {total_pts} double").unwrap();
    for sub in &mesh.subdomains {
        for v in &sub.vertices {
            writeln!(s, "{} {} 0", v[0], v[1]).unwrap();
        }
    }
    writeln!(s, "CELLS {total_tris} {}", 4 * total_tris).unwrap();
    let mut offset = 0;
    for sub in &mesh.subdomains {
        for t in &sub.triangles {
            writeln!(s, "3 {} {} {}", t[0] + offset, t[1] + offset, t[2] + offset).unwrap();
        }
        offset += sub.vertices.len();
    }
    writeln!(s, "CELL_TYPES {total_tris}").unwrap();
    for _ in 0..total_tris {
        writeln!(s, "5").unwrap();
    }
    if let Some((name, values)) = point_data {
        writeln!(s, "POINT_DATA {total_pts}").unwrap();
        writeln!(s, "SCALARS {name} double 1").unwrap();
        writeln!(s, "LOOKUP_TABLE default").unwrap();
        for (sub, vals) in mesh.subdomains.iter().zip(values) {
            for i in 0..sub.vertices.len() {
                writeln!(s, "{}", vals.get(i).copied().unwrap_or(0.0)).unwrap();
            }
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}
