//! Smith-style reduction of small integer relation lattices in `Z^r`.

/// `U A V = diag(invariants)` for the relation matrix `A` whose columns are
/// the relation vectors. Only `U` and its inverse are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Vec<Vec<i128>>,
    pub u_inv: Vec<Vec<i128>>,
    /// One entry per coordinate of `U x`: `0` for a free coordinate, `d > 0`
    /// for a coordinate taken mod `d`.
    pub invariants: Vec<i128>,
}

fn identity(r: usize) -> Vec<Vec<i128>> {
    (0..r).map(|i| (0..r).map(|j| i128::from(i == j)).collect()).collect()
}

struct Reducer {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        if c == 0 {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, s) in m[i].iter_mut().zip(src) {
                *x += c * s;
            }
        }
        for row in &mut self.u_inv {
            row[j] -= c * row[i];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -*x;
        }
        for row in &mut self.u_inv {
            row[i] = -row[i];
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        for row in &mut self.a {
            row[i] += c * row[j];
        }
    }
}

pub fn smith_form(relations: &[Vec<i128>], r: usize) -> SmithForm {
    let q = relations.len();
    let a: Vec<Vec<i128>> = (0..r).map(|i| relations.iter().map(|v| v[i]).collect()).collect();
    let mut red = Reducer { a, u: identity(r), u_inv: identity(r) };
    let mut rank = 0;
    for t in 0..r.min(q) {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..q).map(move |j| (i, j)))
                .filter(|&(i, j)| red.a[i][j] != 0)
                .min_by_key(|&(i, j)| red.a[i][j].abs());
            let Some((pi, pj)) = pivot else { break };
            red.swap_rows(t, pi);
            red.swap_cols(t, pj);
            let p = red.a[t][t];
            let mut dirty = false;
            for i in t + 1..r {
                let f = red.a[i][t] / p;
                red.add_row(i, t, -f);
                dirty |= red.a[i][t] != 0;
            }
            for j in t + 1..q {
                let f = red.a[t][j] / p;
                red.add_col(j, t, -f);
                dirty |= red.a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad_row = (t + 1..r).find(|&i| (t + 1..q).any(|j| red.a[i][j] % p != 0));
            match bad_row {
                Some(i) => red.add_row(t, i, 1),
                None => break,
            }
        }
        if red.a[t][t] == 0 {
            break;
        }
        if red.a[t][t] < 0 {
            red.negate_row(t);
        }
        rank = t + 1;
    }
    let invariants = (0..r).map(|i| if i < rank { red.a[i][i] } else { 0 }).collect();
    SmithForm { u: red.u, u_inv: red.u_inv, invariants }
}
