use nalgebra::DMatrix;

use super::{
    eta_dot, normal_frame, reference_normals, CurvatureTensor, DiffGeoError, Embedding, Jet,
};

/// Geometry of the embedding at a single parameter point.
#[derive(Clone, Debug)]
pub struct NodeGeometry {
    pub u: Vec<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub sqrt_det_g: f64,
    /// Columns form a g-orthonormal basis of the tangent space.
    pub basis: DMatrix<f64>,
    pub frame: Vec<Vec<f64>>,
    pub eta_normal: Vec<f64>,
    /// `h[p][(i, j)] = h_ij^p`.
    pub h: Vec<DMatrix<f64>>,
    /// `h_mixed[p][(i, j)] = h_i^{jp}`.
    pub h_mixed: Vec<DMatrix<f64>>,
    /// `christoffel[(i * n + j) * n + k] = Gamma_ij^k`.
    pub christoffel: Vec<f64>,
    /// `R_ab^{cd}` in the g-orthonormal basis `basis`, from metric
    /// derivatives and Christoffel symbols only.
    pub riemann: CurvatureTensor<f64>,
    /// Same components from the second fundamental form through the Gauss equations.
    pub riemann_gauss: CurvatureTensor<f64>,
    pub clamped: bool,
}

impl NodeGeometry {
    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.n();
        self.christoffel[(i * n + j) * n + k]
    }

    /// `max |n_p . n_q - eta_pq|` in the ambient product.
    pub fn frame_defect(&self, eta: &[f64]) -> f64 {
        let m = self.frame.len();
        let mut worst: f64 = 0.0;
        for p in 0..m {
            for q in 0..m {
                let target = if p == q { self.eta_normal[p] } else { 0.0 };
                worst = worst.max((eta_dot(eta, &self.frame[p], &self.frame[q]) - target).abs());
            }
        }
        worst
    }
}

/// Evaluates [`NodeGeometry`] with a consistent normal frame across a chart.
pub struct Evaluator<'a> {
    emb: &'a dyn Embedding,
    eta: Vec<f64>,
    eta_normal: Vec<f64>,
    reference: Option<Vec<Vec<f64>>>,
    rotation: Option<DMatrix<f64>>,
}

impl<'a> Evaluator<'a> {
    /// `rotation` (optional) replaces the frame by `n'_p = sum_q Q_pq n_q`
    /// and must preserve the normal signature.
    pub fn new(
        emb: &'a dyn Embedding,
        rotation: Option<DMatrix<f64>>,
    ) -> Result<Self, DiffGeoError> {
        emb.chart().validate()?;
        let m = emb.codim();
        if m == 0 {
            return Err(DiffGeoError::Invalid(
                "codimension must be at least 1".into(),
            ));
        }
        let eta = emb.signature().ambient_eta(emb.ambient_dim());
        let eta_normal = emb.signature().normal_eta(m);
        if let Some(q) = &rotation {
            let e = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eta_normal.clone()));
            let defect = if q.nrows() == m && q.ncols() == m {
                (q * &e * q.transpose() - &e).abs().max()
            } else {
                f64::INFINITY
            };
            if defect > 1e-10 {
                return Err(DiffGeoError::BadRotation { m, defect });
            }
        }
        let reference = if emb.normal_seeds(&emb.chart().center()).is_none() {
            Some(reference_normals(emb)?)
        } else {
            None
        };
        Ok(Evaluator {
            emb,
            eta,
            eta_normal,
            reference,
            rotation,
        })
    }

    pub fn embedding(&self) -> &dyn Embedding {
        self.emb
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn eta_normal(&self) -> &[f64] {
        &self.eta_normal
    }

    /// Metric, its inverse, `sqrt(det g)` and a g-orthonormal basis (columns).
    fn metric(
        &self,
        jet: &Jet,
        u: &[f64],
    ) -> Result<(DMatrix<f64>, DMatrix<f64>, f64, DMatrix<f64>), DiffGeoError> {
        let n = jet.d1.len();
        let g = DMatrix::from_fn(n, n, |i, j| eta_dot(&self.eta, &jet.d1[i], &jet.d1[j]));
        let chol = g
            .clone()
            .cholesky()
            .ok_or_else(|| DiffGeoError::NotSpacelike { u: u.to_vec() })?;
        let l = chol.l();
        let sqrt_det = l.diagonal().product();
        let basis = l
            .solve_lower_triangular(&DMatrix::identity(n, n))
            .expect("cholesky factor is invertible")
            .transpose();
        Ok((g, chol.inverse(), sqrt_det, basis))
    }

    /// Jet, metric, normal frame and lowered second fundamental form at `u`.
    pub fn frame_and_h(
        &self,
        u: &[f64],
    ) -> Result<(Jet, Vec<Vec<f64>>, Vec<DMatrix<f64>>), DiffGeoError> {
        let jet = self.emb.jet(u);
        let (_, g_inv, _, _) = self.metric(&jet, u)?;
        let frame = self.frame(&jet, &g_inv, u)?;
        let h = self.second_form(&jet, &frame);
        Ok((jet, frame, h))
    }

    fn frame(
        &self,
        jet: &Jet,
        g_inv: &DMatrix<f64>,
        u: &[f64],
    ) -> Result<Vec<Vec<f64>>, DiffGeoError> {
        let seeds = match &self.reference {
            Some(r) => r.clone(),
            None => self
                .emb
                .normal_seeds(u)
                .expect("seeds present when no reference"),
        };
        let frame = normal_frame(jet, &self.eta, g_inv, &seeds, &self.eta_normal, u)?;
        Ok(match &self.rotation {
            None => frame,
            Some(q) => (0..frame.len())
                .map(|p| {
                    (0..frame[0].len())
                        .map(|a| (0..frame.len()).map(|r| q[(p, r)] * frame[r][a]).sum())
                        .collect()
                })
                .collect(),
        })
    }

    fn second_form(&self, jet: &Jet, frame: &[Vec<f64>]) -> Vec<DMatrix<f64>> {
        let n = jet.d1.len();
        frame
            .iter()
            .enumerate()
            .map(|(p, np)| {
                DMatrix::from_fn(n, n, |i, j| {
                    self.eta_normal[p] * eta_dot(&self.eta, &jet.d2[i][j], np)
                })
            })
            .collect()
    }

    pub fn node(&self, u: &[f64]) -> Result<NodeGeometry, DiffGeoError> {
        let jet = self.emb.jet(u);
        let n = jet.d1.len();
        let (g, g_inv, sqrt_det_g, basis) = self.metric(&jet, u)?;
        let frame = self.frame(&jet, &g_inv, u)?;
        let h = self.second_form(&jet, &frame);
        let h_mixed: Vec<DMatrix<f64>> = h
            .iter()
            .map(|hp| {
                DMatrix::from_fn(n, n, |i, j| {
                    (0..n).map(|k| g_inv[(j, k)] * hp[(k, i)]).sum()
                })
            })
            .collect();

        let eta = &self.eta;
        let r1 = &jet.d1;
        let r2 = &jet.d2;
        let r3 = &jet.d3;
        // dg[k][(i, j)] = d_k g_ij
        let dg: Vec<DMatrix<f64>> = (0..n)
            .map(|k| {
                DMatrix::from_fn(n, n, |i, j| {
                    eta_dot(eta, &r2[i][k], &r1[j]) + eta_dot(eta, &r1[i], &r2[j][k])
                })
            })
            .collect();
        // ddg[k][l][(i, j)] = d_k d_l g_ij
        let ddg: Vec<Vec<DMatrix<f64>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        DMatrix::from_fn(n, n, |i, j| {
                            eta_dot(eta, &r3[i][k][l], &r1[j])
                                + eta_dot(eta, &r2[i][k], &r2[j][l])
                                + eta_dot(eta, &r2[i][l], &r2[j][k])
                                + eta_dot(eta, &r1[i], &r3[j][k][l])
                        })
                    })
                    .collect()
            })
            .collect();

        let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        // first-kind symbols [ij, l] and their derivatives
        let first =
            |i: usize, j: usize, l: usize| 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
        let dfirst = |m: usize, i: usize, j: usize, l: usize| {
            0.5 * (ddg[m][i][(j, l)] + ddg[m][j][(i, l)] - ddg[m][l][(i, j)])
        };
        let mut christoffel = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    christoffel[idx(i, j, k)] =
                        (0..n).map(|l| g_inv[(k, l)] * first(i, j, l)).sum();
                }
            }
        }
        let gam = |i: usize, j: usize, k: usize| christoffel[idx(i, j, k)];
        // R_{lkij} = g_lm R^m_{kij} = d_i [kj,l] - d_j [ki,l] - [il,s] G^s_{kj} + [jl,s] G^s_{ki}
        let mut lowered = vec![0.0; n * n * n * n];
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut v = dfirst(i, k, j, l) - dfirst(j, k, i, l);
                        for s in 0..n {
                            v += first(j, l, s) * gam(k, i, s) - first(i, l, s) * gam(k, j, s);
                        }
                        lowered[((l * n + k) * n + i) * n + j] = v;
                    }
                }
            }
        }
        // R_ab^{cd} in the orthonormal basis is R_{cdab} with every slot transformed
        let mut t = lowered;
        for slot in 0..4 {
            let stride = n.pow(3 - slot as u32);
            let mut out = vec![0.0; t.len()];
            for (x, o) in out.iter_mut().enumerate() {
                let a = (x / stride) % n;
                let base = x - a * stride;
                *o = (0..n).map(|i| basis[(i, a)] * t[base + i * stride]).sum();
            }
            t = out;
        }
        let riemann = CurvatureTensor::from_fn(n, |a, b, c, d| t[((c * n + d) * n + a) * n + b]);
        let h_hat: Vec<DMatrix<f64>> = h.iter().map(|hp| basis.transpose() * hp * &basis).collect();
        let riemann_gauss = CurvatureTensor::from_fn(n, |a, b, c, d| {
            h_hat
                .iter()
                .zip(&self.eta_normal)
                .map(|(hh, e)| e * (hh[(a, c)] * hh[(b, d)] - hh[(b, c)] * hh[(a, d)]))
                .sum()
        });
        Ok(NodeGeometry {
            u: u.to_vec(),
            g,
            g_inv,
            sqrt_det_g,
            basis,
            frame,
            eta_normal: self.eta_normal.clone(),
            h,
            h_mixed,
            christoffel,
            riemann,
            riemann_gauss,
            clamped: jet.clamped,
        })
    }
}
