use super::PointSet;
use crate::error::{Error, Result};
use crate::hyperbolic::{cosh_distance, tet_circumsphere};
use crate::tolerance;

/// Every 4-subset whose circumsphere exists and has no other point strictly
/// inside, as sorted id tuples in lexicographic order.
pub fn brute_force_delaunay(points: &PointSet) -> Result<Vec<[usize; 4]>> {
    let p = &points.points;
    let n = p.len();
    if n > tolerance::BRUTE_FORCE_MAX {
        return Err(Error::TooManyPoints { got: n, limit: tolerance::BRUTE_FORCE_MAX });
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let Ok(s) = tet_circumsphere(&p[i], &p[j], &p[k], &p[l]) else { continue };
                    let limit = s.radius.cosh() - tolerance::EMPTY_SPHERE;
                    let empty = (0..n)
                        .filter(|&m| m != i && m != j && m != k && m != l)
                        .all(|m| cosh_distance(&s.center, &p[m]) >= limit);
                    if empty {
                        out.push([i, j, k, l]);
                    }
                }
            }
        }
    }
    Ok(out)
}
