//! Built-in model complexes used by tests, benchmarks and the CLI corpus.

use crate::simplicial::SimplicialComplex;

/// A single 0-cell.
pub fn point() -> SimplicialComplex {
    SimplicialComplex::from_simplices("point", &[vec!["a"]]).unwrap()
}

/// The unit interval: one edge oriented from `a` to `b`.
pub fn interval() -> SimplicialComplex {
    SimplicialComplex::from_simplices("interval", &[vec!["a", "b"]]).unwrap()
}

/// Circle model with two vertices and two distinct edges between them.
pub fn circle() -> SimplicialComplex {
    SimplicialComplex::from_simplices("circle", &[vec!["a", "b"], vec!["b", "a"]]).unwrap()
}

/// Boundary of the tetrahedron on `a,b,c,d`: a triangulated 2-sphere.
pub fn sphere() -> SimplicialComplex {
    SimplicialComplex::from_simplices(
        "sphere",
        &[
            vec!["b", "c", "d"],
            vec!["a", "c", "d"],
            vec!["a", "b", "d"],
            vec!["a", "b", "c"],
        ],
    )
    .unwrap()
}

/// Seven-vertex triangulated torus: triangles `{i, i+1, i+3}` and
/// `{i, i+2, i+3}` modulo 7.
pub fn torus() -> SimplicialComplex {
    let labels: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
    let mut tris: Vec<Vec<&str>> = Vec::new();
    let mut store: Vec<[usize; 3]> = Vec::new();
    for i in 0..7 {
        store.push([i, (i + 1) % 7, (i + 3) % 7]);
        store.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    for t in &store {
        let mut v = t.to_vec();
        v.sort_unstable();
        tris.push(v.iter().map(|&i| labels[i].as_str()).collect());
    }
    SimplicialComplex::from_simplices("torus", &tris).unwrap()
}

/// The filled triangle, handy for exercising 2-dimensional closures.
pub fn triangle() -> SimplicialComplex {
    SimplicialComplex::from_simplices("triangle", &[vec!["a", "b", "c"]]).unwrap()
}

/// JSON documents for the shipped fixture corpus, keyed by fixture name.
pub fn corpus_documents() -> Vec<(&'static str, String)> {
    vec![
        ("point", r#"{"name":"point","simplices":[["a"]]}"#.to_string()),
        (
            "interval",
            r#"{"name":"interval","simplices":[["a","b"]]}"#.to_string(),
        ),
        (
            "circle",
            r#"{"name":"circle","simplices":[["a","b"],["b","a"]]}"#.to_string(),
        ),
        (
            "sphere",
            r#"{"name":"sphere","simplices":[["b","c","d"],["a","c","d"],["a","b","d"],["a","b","c"]]}"#
                .to_string(),
        ),
        ("torus", torus_json()),
    ]
}

fn torus_json() -> String {
    let mut tris: Vec<Vec<String>> = Vec::new();
    for i in 0..7usize {
        for t in [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]] {
            let mut v = t.to_vec();
            v.sort_unstable();
            tris.push(v.iter().map(|&j| format!("v{j}")).collect());
        }
    }
    serde_json::json!({ "name": "torus", "simplices": tris }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::homology_of_complex;

    #[test]
    fn betti_numbers_of_corpus() {
        let cases: Vec<(SimplicialComplex, Vec<usize>)> = vec![
            (point(), vec![1]),
            (interval(), vec![1, 0]),
            (circle(), vec![1, 1]),
            (sphere(), vec![1, 0, 1]),
            (torus(), vec![1, 2, 1]),
        ];
        for (k, expected) in cases {
            let h = homology_of_complex(&k.chain_complex_data()).unwrap();
            assert_eq!(h.betti, expected, "betti of {}", k.name);
        }
    }

    #[test]
    fn corpus_documents_load() {
        for (name, doc) in corpus_documents() {
            let k = SimplicialComplex::load_json(&doc).unwrap();
            assert_eq!(k.name, name);
        }
    }
}
