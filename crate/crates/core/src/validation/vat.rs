use crate::clustering::Dissimilarity;

/// VAT reordering: start at the first row of the most distant pair, then
/// append points in Prim's minimum-spanning-tree order. Ties go to the lower
/// index.
pub fn vat_order(d: &Dissimilarity) -> Vec<usize> {
    let n = d.len();
    if n == 0 {
        return Vec::new();
    }
    let mut start = 0;
    let mut far = -1.0;
    for i in 0..n {
        for j in i + 1..n {
            if d.get(i, j) > far {
                far = d.get(i, j);
                start = i;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut reach = vec![f64::INFINITY; n];
    let mut next = start;
    for _ in 0..n {
        visited[next] = true;
        order.push(next);
        for j in 0..n {
            if !visited[j] {
                reach[j] = reach[j].min(d.get(next, j));
            }
        }
        let mut best = (usize::MAX, f64::INFINITY);
        for j in 0..n {
            if !visited[j] && (best.0 == usize::MAX || reach[j] < best.1) {
                best = (j, reach[j]);
            }
        }
        next = best.0;
    }
    order
}

/// Dissimilarity matrix with rows and columns permuted by `order`.
pub fn reorder(d: &Dissimilarity, order: &[usize]) -> Dissimilarity {
    d.subset(order)
}
