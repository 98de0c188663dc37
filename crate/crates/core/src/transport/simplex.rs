//! Transportation simplex over integer costs.
//!
//! The basis is a spanning tree on `rows + cols` nodes. Costs are integers,
//! so the simplex multipliers (`u`, `v`) are integers too and pricing is exact
//! in both arithmetic modes; only the flows use the generic scalar.

use crate::scalar::Scalar;

/// Optimal basis of a balanced transportation problem.
#[derive(Debug, Clone)]
pub(crate) struct BasicSolution<S> {
    /// `(row, col, flow)` for every basic cell, degenerate ones included.
    pub cells: Vec<(usize, usize, S)>,
    /// Row multipliers, `u[0] == 0`.
    pub u: Vec<i64>,
    /// Column multipliers, with `u[i] + v[j] == cost[i][j]` on basic cells.
    pub v: Vec<i64>,
    pub pivots: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pricing {
    /// Best candidate within a rotating block of cells.
    Block,
    /// Lowest-index improving cell; used once degenerate pivots pile up.
    Bland,
}

struct Tableau<'a, S> {
    rows: usize,
    cols: usize,
    cost: &'a [i64],
    cells: Vec<(usize, usize)>,
    flow: Vec<S>,
    /// Basic cell ids touching each node (rows first, then columns).
    incident: Vec<Vec<usize>>,
    u: Vec<i64>,
    v: Vec<i64>,
    parent: Vec<usize>,
    parent_cell: Vec<usize>,
    depth: Vec<usize>,
    order: Vec<usize>,
}

/// Solves `min sum cost[i][j] x[i][j]` subject to row sums `supply` and
/// column sums `demand`. `cost` is row-major; both sides must be non-empty
/// and balanced.
pub(crate) fn solve<S: Scalar>(supply: &[S], demand: &[S], cost: &[i64]) -> BasicSolution<S> {
    let (rows, cols) = (supply.len(), demand.len());
    assert!(rows > 0 && cols > 0, "empty transportation problem");
    assert_eq!(cost.len(), rows * cols);

    let mut t = Tableau::initial(supply, demand, cost);
    let cells_total = rows * cols;
    let block = ((cells_total as f64).sqrt() as usize)
        .max(16)
        .min(cells_total);
    let mut pricing = Pricing::Block;
    let mut cursor = 0usize;
    let mut degenerate_run = 0usize;
    let mut pivots = 0usize;

    loop {
        t.refresh_tree();
        let entering = match pricing {
            Pricing::Block => t.block_candidate(&mut cursor, block),
            Pricing::Bland => t.bland_candidate(),
        };
        let Some(cell) = entering else { break };
        let degenerate = t.pivot(cell / cols, cell % cols);
        pivots += 1;
        if degenerate {
            degenerate_run += 1;
            if degenerate_run > rows + cols {
                pricing = Pricing::Bland;
            }
        } else {
            degenerate_run = 0;
        }
    }

    BasicSolution {
        cells: t
            .cells
            .iter()
            .zip(t.flow)
            .map(|(&(i, j), f)| (i, j, f))
            .collect(),
        u: t.u,
        v: t.v,
        pivots,
    }
}

impl<'a, S: Scalar> Tableau<'a, S> {
    /// Least-cost start: visit cells by increasing cost, allocate as much as
    /// possible and retire exactly one line per allocation (both on the last),
    /// which yields a spanning tree of `rows + cols - 1` cells.
    fn initial(supply: &[S], demand: &[S], cost: &'a [i64]) -> Self {
        let (rows, cols) = (supply.len(), demand.len());
        let mut order: Vec<usize> = (0..rows * cols).collect();
        order.sort_by_key(|&c| cost[c]);

        let mut row_left: Vec<S> = supply.to_vec();
        let mut col_left: Vec<S> = demand.to_vec();
        let mut row_open = vec![true; rows];
        let mut col_open = vec![true; cols];
        let (mut open_rows, mut open_cols) = (rows, cols);
        let mut cells = Vec::with_capacity(rows + cols - 1);
        let mut flow = Vec::with_capacity(rows + cols - 1);

        for c in order {
            if open_rows == 0 || open_cols == 0 {
                break;
            }
            let (i, j) = (c / cols, c % cols);
            if !row_open[i] || !col_open[j] {
                continue;
            }
            let q = if row_left[i] <= col_left[j] {
                row_left[i].clone()
            } else {
                col_left[j].clone()
            };
            row_left[i] = clamp(row_left[i].clone() - q.clone());
            col_left[j] = clamp(col_left[j].clone() - q.clone());
            cells.push((i, j));
            flow.push(q);

            let retire_row = if open_rows == 1 && open_cols == 1 {
                row_open[i] = false;
                col_open[j] = false;
                open_rows -= 1;
                open_cols -= 1;
                continue;
            } else if open_rows == 1 {
                false
            } else if open_cols == 1 {
                true
            } else {
                row_left[i] <= col_left[j]
            };
            if retire_row {
                row_open[i] = false;
                open_rows -= 1;
            } else {
                col_open[j] = false;
                open_cols -= 1;
            }
        }
        debug_assert_eq!(cells.len(), rows + cols - 1);

        let mut incident = vec![Vec::new(); rows + cols];
        for (id, &(i, j)) in cells.iter().enumerate() {
            incident[i].push(id);
            incident[rows + j].push(id);
        }
        let nodes = rows + cols;
        Tableau {
            rows,
            cols,
            cost,
            cells,
            flow,
            incident,
            u: vec![0; rows],
            v: vec![0; cols],
            parent: vec![usize::MAX; nodes],
            parent_cell: vec![usize::MAX; nodes],
            depth: vec![0; nodes],
            order: Vec::with_capacity(nodes),
        }
    }

    /// Re-roots the basis tree at row 0 and recomputes the multipliers.
    fn refresh_tree(&mut self) {
        let rows = self.rows;
        self.order.clear();
        self.order.push(0);
        self.parent[0] = usize::MAX;
        self.parent_cell[0] = usize::MAX;
        self.depth[0] = 0;
        self.u[0] = 0;
        let mut head = 0;
        while head < self.order.len() {
            let node = self.order[head];
            head += 1;
            for &id in &self.incident[node] {
                if id == self.parent_cell[node] {
                    continue;
                }
                let (i, j) = self.cells[id];
                let c = self.cost[i * self.cols + j];
                let child = if node < rows {
                    self.v[j] = c - self.u[i];
                    rows + j
                } else {
                    self.u[i] = c - self.v[j];
                    i
                };
                self.parent[child] = node;
                self.parent_cell[child] = id;
                self.depth[child] = self.depth[node] + 1;
                self.order.push(child);
            }
        }
        debug_assert_eq!(
            self.order.len(),
            rows + self.cols,
            "basis is not a spanning tree"
        );
    }

    fn reduced_cost(&self, cell: usize) -> i64 {
        let (i, j) = (cell / self.cols, cell % self.cols);
        self.cost[cell] - self.u[i] - self.v[j]
    }

    fn block_candidate(&self, cursor: &mut usize, block: usize) -> Option<usize> {
        let total = self.rows * self.cols;
        let mut best: Option<(i64, usize)> = None;
        let mut scanned = 0;
        let mut in_block = 0;
        while scanned < total {
            let cell = *cursor;
            *cursor = if cell + 1 == total { 0 } else { cell + 1 };
            scanned += 1;
            in_block += 1;
            let r = self.reduced_cost(cell);
            if r < 0 && best.is_none_or(|(b, _)| r < b) {
                best = Some((r, cell));
            }
            if in_block == block {
                if best.is_some() {
                    break;
                }
                in_block = 0;
            }
        }
        best.map(|(_, cell)| cell)
    }

    fn bland_candidate(&self) -> Option<usize> {
        (0..self.rows * self.cols).find(|&cell| self.reduced_cost(cell) < 0)
    }

    /// Brings `(i, j)` into the basis. Returns true for a degenerate pivot.
    fn pivot(&mut self, i: usize, j: usize) -> bool {
        let rows = self.rows;
        // Tree path from column j to row i; with the entering cell it closes
        // the cycle, whose cells alternate between losing and gaining flow.
        let (mut a, mut b) = (i, rows + j);
        let mut from_row = Vec::new();
        let mut from_col = Vec::new();
        while self.depth[a] > self.depth[b] {
            from_row.push(self.parent_cell[a]);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            from_col.push(self.parent_cell[b]);
            b = self.parent[b];
        }
        while a != b {
            from_row.push(self.parent_cell[a]);
            a = self.parent[a];
            from_col.push(self.parent_cell[b]);
            b = self.parent[b];
        }
        let path: Vec<usize> = from_col
            .into_iter()
            .chain(from_row.into_iter().rev())
            .collect();

        let mut leaving = usize::MAX;
        for &id in path.iter().step_by(2) {
            if leaving == usize::MAX {
                leaving = id;
                continue;
            }
            let better = self.flow[id] < self.flow[leaving]
                || (self.flow[id] == self.flow[leaving]
                    && self.cell_index(id) < self.cell_index(leaving));
            if better {
                leaving = id;
            }
        }
        let theta = self.flow[leaving].clone();
        let degenerate = theta == S::zero();
        for (pos, &id) in path.iter().enumerate() {
            if id == leaving {
                continue;
            }
            let current = self.flow[id].clone();
            self.flow[id] = if pos % 2 == 0 {
                clamp(current - theta.clone())
            } else {
                current + theta.clone()
            };
        }

        let (li, lj) = self.cells[leaving];
        self.incident[li].retain(|&x| x != leaving);
        self.incident[rows + lj].retain(|&x| x != leaving);
        self.cells[leaving] = (i, j);
        self.flow[leaving] = theta;
        self.incident[i].push(leaving);
        self.incident[rows + j].push(leaving);
        degenerate
    }

    fn cell_index(&self, id: usize) -> usize {
        let (i, j) = self.cells[id];
        i * self.cols + j
    }
}

/// Round-off in float mode can push a flow marginally below zero.
fn clamp<S: Scalar>(x: S) -> S {
    if x < S::zero() {
        S::zero()
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn objective(sol: &BasicSolution<BigRational>, cost: &[i64], cols: usize) -> BigRational {
        sol.cells.iter().fold(q(0, 1), |acc, (i, j, f)| {
            acc + f.clone() * q(cost[i * cols + j], 1)
        })
    }

    #[test]
    fn textbook_instance() {
        // Classic 3x4 example with optimum 743.
        let supply = [q(7, 1), q(9, 1), q(18, 1)];
        let demand = [q(5, 1), q(8, 1), q(7, 1), q(14, 1)];
        let cost = [19, 30, 50, 10, 70, 30, 40, 60, 40, 8, 70, 20];
        let sol = solve(&supply, &demand, &cost);
        assert_eq!(objective(&sol, &cost, 4), q(743, 1));
        assert_eq!(sol.cells.len(), 6);
        for (i, j, _) in &sol.cells {
            assert_eq!(sol.u[*i] + sol.v[*j], cost[i * 4 + j]);
        }
        for i in 0..3 {
            for j in 0..4 {
                assert!(sol.u[i] + sol.v[j] <= cost[i * 4 + j]);
            }
        }
    }

    #[test]
    fn single_cell() {
        let sol = solve(&[q(1, 1)], &[q(1, 1)], &[3]);
        assert_eq!(sol.cells, vec![(0, 0, q(1, 1))]);
        assert_eq!((sol.u[0], sol.v[0]), (0, 3));
    }

    #[test]
    fn degenerate_square_terminates() {
        // Equal supplies and demands make every least-cost step degenerate.
        let n = 6;
        let supply = vec![q(1, n as i64); n];
        let demand = supply.clone();
        let cost: Vec<i64> = (0..n * n)
            .map(|c| ((c / n) as i64 - (c % n) as i64).abs())
            .collect();
        let sol = solve(&supply, &demand, &cost);
        assert_eq!(objective(&sol, &cost, n), q(0, 1));
    }

    #[test]
    fn float_flows_stay_nonnegative() {
        let supply = [0.3, 0.3, 0.4];
        let demand = [0.1, 0.6, 0.3];
        let cost = [1, 2, 3, 2, 1, 2, 3, 2, 1];
        let sol = solve(&supply, &demand, &cost);
        assert!(sol.cells.iter().all(|(_, _, f)| *f >= 0.0));
        let value: f64 = sol
            .cells
            .iter()
            .map(|(i, j, f)| f * cost[i * 3 + j] as f64)
            .sum();
        assert!((value - 1.3).abs() < 1e-12, "{value}");
    }
}
