//! Micro structures and full instance assembly.

use crate::model::CostModel;
use crate::tree::{Label, LabeledTree, NodeId};
use num_bigint::BigInt;

use super::gadgets::{
    i_gadget_with, i_segment_for, ConnectionType, CostRegistry, DecreaseType, LabelAlloc,
};
use super::{
    enumerate_subcliques, shift_weights, CliqueEnumeration, CliqueError, CliqueKey, MPolicy,
    PairWeightTable, ReductionParams, ShiftedWeights,
};
use crate::graph::WeightedGraph;

/// The label groups and gadget types shared by every micro structure.
struct Workspace {
    params: ReductionParams,
    ce: CliqueEnumeration,
    sw: ShiftedWeights,
    w: PairWeightTable,
    alloc: LabelAlloc,
    reg: CostRegistry,
    blank: Label,
    // Group 1: trees on the top-left leaves and the bottom-right spine.
    d1: DecreaseType,
    conn1: ConnectionType,
    // Group 2: trees on the bottom-left spine and the top-right leaves.
    d3: DecreaseType,
    conn2: ConnectionType,
    // Group 3: trees interleaved with the top spines.
    d5: DecreaseType,
    conn_ac: ConnectionType,
    conn_acp: ConnectionType,
    ac_root_a: Label,
    ac_root_a1: Label,
    ac_root_c: Label,
    ac_root_c1: Label,
}

impl Workspace {
    fn new(g: &WeightedGraph, k: usize, policy: &MPolicy) -> Result<Workspace, CliqueError> {
        let params = super::reduction_params(g, k, policy)?;
        let ce = enumerate_subcliques(g, k)?;
        let sw = shift_weights(g, k);
        let w = PairWeightTable::build(&ce, &sw);
        let mut alloc = LabelAlloc::default();
        let mut reg = CostRegistry::default();
        let blank = alloc.fresh();
        let (n, kk, base, d) = (params.n, params.kk, params.base, params.d);

        let d1 = DecreaseType::new(&mut alloc, &mut reg, base, d);
        let conn1 = ConnectionType::new(
            &mut alloc,
            &mut reg,
            n,
            kk,
            base,
            d,
            params.m.clone(),
            &params.w_total,
        )?;
        let d3 = DecreaseType::new(&mut alloc, &mut reg, base, d);
        let conn2 = ConnectionType::new(
            &mut alloc,
            &mut reg,
            n,
            kk,
            base,
            d,
            params.m.clone(),
            &params.w_total,
        )?;
        let d5 = DecreaseType::new(&mut alloc, &mut reg, base, d);
        let conn_ac = ConnectionType::new(
            &mut alloc,
            &mut reg,
            n,
            kk,
            base,
            d,
            params.p1(),
            &params.w_total,
        )?;
        // Modified weights w'(u,v) = M - wshift(u,v), diagonal included, keep
        // W' affine in W so the A/C pair value telescopes exactly.
        let w_total_p = BigInt::from((n * (n - 1) / 2) as u64) * &params.m - &params.w_total;
        let conn_acp = ConnectionType::new(
            &mut alloc,
            &mut reg,
            n,
            kk,
            base,
            d,
            params.p2(),
            &w_total_p,
        )?;
        let ac_root_a = alloc.fresh();
        let ac_root_a1 = alloc.fresh();
        let ac_root_c = alloc.fresh();
        let ac_root_c1 = alloc.fresh();
        reg.set_sym(ac_root_a, ac_root_c1, -params.m_pow(5).clone());
        reg.set_sym(ac_root_a1, ac_root_c, -params.m_pow(5).clone());
        reg.set_sym(ac_root_a1, ac_root_c1, -params.m_pow(5) - w.get(1, 1));

        Ok(Workspace {
            params,
            ce,
            sw,
            w,
            alloc,
            reg,
            blank,
            d1,
            conn1,
            d3,
            conn2,
            d5,
            conn_ac,
            conn_acp,
            ac_root_a,
            ac_root_a1,
            ac_root_c,
            ac_root_c1,
        })
    }

    fn shifted_view(&self) -> impl Fn(usize, usize) -> BigInt + '_ {
        |u, v| self.sw.get(u, v)
    }

    fn modified_view(&self) -> impl Fn(usize, usize) -> BigInt + '_ {
        |u, v| &self.params.m - self.sw.get(u, v)
    }

    /// Tree attached to the top-left leaf a'_i.
    fn a_prime(&self, i: usize) -> Result<LabeledTree, CliqueError> {
        let p = &self.params;
        let x = p.m_pow(6) + p.m_pow(3) * BigInt::from((p.cap_n - i) as u64) - &p.m;
        let mut t = LabeledTree::empty();
        let dl = t.graft(&self.d1.left_tree(&x)?);
        let cl = t.graft(&self.conn1.left_tree(self.ce.subset(i), &self.shifted_view())?);
        let root = t.add_node(self.blank, vec![dl, cl]);
        t.set_root(root);
        Ok(t)
    }

    /// Tree attached to the bottom-right spine node d_z.
    fn d_micro(&self, z: usize) -> Result<LabeledTree, CliqueError> {
        let mut t = LabeledTree::empty();
        let dr = t.graft(&self.d1.right_tree());
        let cr = t.graft(&self.conn1.right_tree(self.ce.subset(z), &self.shifted_view())?);
        let root = t.add_node(self.blank, vec![dr, cr]);
        t.set_root(root);
        Ok(t)
    }

    /// Tree attached to the bottom-left spine node b_z.
    fn b_micro(&self, z: usize) -> Result<LabeledTree, CliqueError> {
        let mut t = LabeledTree::empty();
        let dr = t.graft(&self.d3.right_tree());
        let cl = t.graft(&self.conn2.left_tree(self.ce.subset(z), &self.shifted_view())?);
        let root = t.add_node(self.blank, vec![dr, cl]);
        t.set_root(root);
        Ok(t)
    }

    /// Tree attached to the top-right leaf c'_j.
    fn c_prime(&self, j: usize) -> Result<LabeledTree, CliqueError> {
        let p = &self.params;
        let x = p.m_pow(6) + p.m_pow(3) * BigInt::from((p.cap_n - j) as u64) - &p.m;
        let mut t = LabeledTree::empty();
        let dl = t.graft(&self.d3.left_tree(&x)?);
        let cr = t.graft(&self.conn2.right_tree(self.ce.subset(j), &self.shifted_view())?);
        let root = t.add_node(self.blank, vec![dl, cr]);
        t.set_root(root);
        Ok(t)
    }

    /// Tree attached above the top-left spine node a_i.
    fn a_micro(&self, i: usize) -> Result<LabeledTree, CliqueError> {
        let p = &self.params;
        let mut t = LabeledTree::empty();
        if i == 1 {
            let dr = t.graft(&self.d5.right_tree());
            let root = t.add_node(self.ac_root_a1, vec![dr]);
            t.set_root(root);
            return Ok(t);
        }
        let c_ac = t.graft(&self.conn_ac.right_tree(self.ce.subset(i), &self.shifted_view())?);
        let c_acp =
            t.graft(&self.conn_acp.right_tree(self.ce.subset(i - 1), &self.modified_view())?);
        let junction = t.add_node(self.blank, vec![c_ac, c_acp]);
        let x = p.m_pow(3) * BigInt::from((i - 1) as u64) + self.w.get(1, i);
        let dl = t.graft(&self.d5.left_tree(&x)?);
        let root = t.add_node(self.ac_root_a, vec![junction, dl]);
        t.set_root(root);
        Ok(t)
    }

    /// Tree attached above the top-right spine node c_j.
    fn c_micro(&self, j: usize) -> Result<LabeledTree, CliqueError> {
        let p = &self.params;
        let mut t = LabeledTree::empty();
        if j == 1 {
            let dr = t.graft(&self.d5.right_tree());
            let root = t.add_node(self.ac_root_c1, vec![dr]);
            t.set_root(root);
            return Ok(t);
        }
        let x = p.m_pow(3) * BigInt::from((j - 1) as u64) + self.w.get(j, 1);
        let dl = t.graft(&self.d5.left_tree(&x)?);
        let c_ac = t.graft(&self.conn_ac.left_tree(self.ce.subset(j), &self.shifted_view())?);
        let c_acp =
            t.graft(&self.conn_acp.left_tree(self.ce.subset(j - 1), &self.modified_view())?);
        let junction = t.add_node(self.blank, vec![c_ac, c_acp]);
        let root = t.add_node(self.ac_root_c, vec![dl, junction]);
        t.set_root(root);
        Ok(t)
    }

    /// Structural class per label: finite costs must stay inside one class.
    /// Class 0 is inert.
    fn label_classes(&self, alphabet: u32, iota: &[Label]) -> Vec<u16> {
        let mut classes = vec![0u16; alphabet as usize];
        let mut next: u16 = 1;
        let tag = |labels: &[Label], classes: &mut Vec<u16>, next: &mut u16| {
            let id = *next;
            *next += 1;
            for l in labels {
                classes[l.0 as usize] = id;
            }
        };
        let conn = |c: &ConnectionType, classes: &mut Vec<u16>, next: &mut u16| {
            let t = |labels: &[Label], classes: &mut Vec<u16>, next: &mut u16| {
                let id = *next;
                *next += 1;
                for l in labels {
                    classes[l.0 as usize] = id;
                }
            };
            t(&[c.root_l, c.root_r], classes, next);
            t(&[c.child_l, c.child_r], classes, next);
            t(&[c.eq.l1, c.eq.r1], classes, next);
            t(&[c.eq.l2, c.eq.r2], classes, next);
            for i in 0..c.dt.d {
                t(&[c.dt.left[i], c.dt.right[i]], classes, next);
            }
        };
        for dt in [&self.d1, &self.d3, &self.d5] {
            for i in 0..dt.d {
                tag(&[dt.left[i], dt.right[i]], &mut classes, &mut next);
            }
        }
        for c in [&self.conn1, &self.conn2, &self.conn_ac, &self.conn_acp] {
            conn(c, &mut classes, &mut next);
        }
        tag(
            &[
                self.ac_root_a,
                self.ac_root_a1,
                self.ac_root_c,
                self.ac_root_c1,
            ],
            &mut classes,
            &mut next,
        );
        for &l in iota {
            tag(&[l], &mut classes, &mut next);
        }
        classes
    }
}

/// All micro-structure trees plus the model pricing them, for contract tests.
pub struct MicroStructures {
    pub a_prime: Vec<LabeledTree>,
    pub d: Vec<LabeledTree>,
    pub b: Vec<LabeledTree>,
    pub c_prime: Vec<LabeledTree>,
    pub a: Vec<LabeledTree>,
    pub c: Vec<LabeledTree>,
    pub model: CostModel,
    pub params: ReductionParams,
    pub w: PairWeightTable,
}

/// Builds every micro structure for all indices 1..=N.
pub fn build_micro_structures(
    g: &WeightedGraph,
    k: usize,
    policy: &MPolicy,
) -> Result<MicroStructures, CliqueError> {
    let ws = Workspace::new(g, k, policy)?;
    let cap_n = ws.params.cap_n;
    let mut out = MicroStructures {
        a_prime: Vec::new(),
        d: Vec::new(),
        b: Vec::new(),
        c_prime: Vec::new(),
        a: Vec::new(),
        c: Vec::new(),
        model: CostModel::new_matching(0),
        params: ws.params.clone(),
        w: ws.w.clone(),
    };
    for i in 1..=cap_n {
        out.a_prime.push(ws.a_prime(i)?);
        out.d.push(ws.d_micro(i)?);
        out.b.push(ws.b_micro(i)?);
        out.c_prime.push(ws.c_prime(i)?);
        out.a.push(ws.a_micro(i)?);
        out.c.push(ws.c_micro(i)?);
    }
    out.model = ws.reg.to_model(ws.alloc.count());
    Ok(out)
}

/// Size and alphabet measurements of a build.
#[derive(Clone, Debug)]
pub struct BuildStats {
    pub f_size: usize,
    pub g_size: usize,
    pub alphabet: u32,
    pub d: usize,
}

/// A generated hard instance with its extraction key.
pub struct CliqueInstance {
    pub f: LabeledTree,
    pub g: LabeledTree,
    pub model: CostModel,
    pub key: CliqueKey,
    pub stats: BuildStats,
    /// Structural class per label, for the group-discipline audit.
    pub label_classes: Vec<u16>,
}

impl CliqueInstance {
    /// Checks that no finite cost crosses a structural label class.
    pub fn audit_label_groups(&self) -> Result<(), String> {
        for (&(a, b), c) in self.model.iter_finite() {
            let ca = self.label_classes[a.0 as usize];
            let cb = self.label_classes[b.0 as usize];
            if ca == 0 || cb == 0 {
                return Err(format!("finite cost {c} on inert label {} or {}", a.0, b.0));
            }
            if ca != cb {
                return Err(format!(
                    "finite cost {c} crosses classes {ca} and {cb} (labels {} and {})",
                    a.0, b.0
                ));
            }
        }
        Ok(())
    }
}

/// Compiles the graph into the full two-tree instance.
pub fn build_clique_instance(
    g: &WeightedGraph,
    k: usize,
    policy: &MPolicy,
) -> Result<CliqueInstance, CliqueError> {
    let mut ws = Workspace::new(g, k, policy)?;
    let cap_n = ws.params.cap_n;
    let (n, kk) = (ws.params.n, ws.params.kk);

    // Macro labels.
    let a_sp = ws.alloc.fresh();
    let a_lf = ws.alloc.fresh();
    let b_sp = ws.alloc.fresh();
    let b_lf = ws.alloc.fresh();
    let c_sp = ws.alloc.fresh();
    let c_lf = ws.alloc.fresh();
    let d_sp = ws.alloc.fresh();
    let d_lf = ws.alloc.fresh();
    let (i_tree, iota) = i_gadget_with(n, kk, &mut ws.alloc);

    {
        let p = ws.params.clone();
        ws.reg.set_sym(b_sp, c_lf, -p.m_pow(8).clone());
        ws.reg.set_sym(a_lf, d_sp, -p.m_pow(8).clone());
        ws.reg.set_sym(b_lf, d_lf, -BigInt::from(2u8) * p.m_pow(7));
        ws.reg
            .set_sym(a_sp, c_sp, -BigInt::from(2u8) * p.m_pow(3) + p.m_pow(2));
        let mut npow = BigInt::from(1u8);
        for &l in &iota {
            ws.reg.set_sym(l, l, -p.m_pow(7) * &npow);
            npow *= n as u64;
        }
    }

    // Left tree, built bottom-up: b_{N+1}, b_N .. b_1, then a_N .. a_1, a_0.
    let mut f = LabeledTree::empty();
    let mut below: NodeId = {
        let leaf = f.add_node(ws.blank, Vec::new());
        f.add_node(ws.blank, vec![leaf])
    };
    for z in (1..=cap_n).rev() {
        let spine_child = if z <= cap_n - 1 {
            f.add_node(iota[i_segment_for(cap_n, z, n, kk)], vec![below])
        } else {
            below
        };
        let micro = f.graft(&ws.b_micro(z)?);
        let leaf = f.add_node(b_lf, Vec::new());
        below = f.add_node(b_sp, vec![spine_child, micro, leaf]);
    }
    for i in (1..=cap_n).rev() {
        let ap = f.graft(&ws.a_prime(i)?);
        let icopy = f.graft(&i_tree);
        let leaf = f.add_node(a_lf, vec![ap, icopy]);
        let children = if i < cap_n {
            let micro = f.graft(&ws.a_micro(i + 1)?);
            vec![below, micro, leaf]
        } else {
            vec![below, leaf]
        };
        below = f.add_node(a_sp, children);
    }
    let a1 = f.graft(&ws.a_micro(1)?);
    let root = f.add_node(ws.blank, vec![below, a1]);
    f.set_root(root);

    // Right tree: d_{N+1}, d_N .. d_1, then c_N .. c_1, c_0.
    let mut gt = LabeledTree::empty();
    let mut below: NodeId = {
        let leaf = gt.add_node(ws.blank, Vec::new());
        gt.add_node(ws.blank, vec![leaf])
    };
    for z in (1..=cap_n).rev() {
        let spine_child = if z <= cap_n - 1 {
            gt.add_node(iota[i_segment_for(cap_n, z, n, kk)], vec![below])
        } else {
            below
        };
        let leaf = gt.add_node(d_lf, Vec::new());
        let micro = gt.graft(&ws.d_micro(z)?);
        below = gt.add_node(d_sp, vec![leaf, micro, spine_child]);
    }
    for j in (1..=cap_n).rev() {
        let icopy = gt.graft(&i_tree);
        let cp = gt.graft(&ws.c_prime(j)?);
        let leaf = gt.add_node(c_lf, vec![icopy, cp]);
        let children = if j < cap_n {
            let micro = gt.graft(&ws.c_micro(j + 1)?);
            vec![leaf, below, micro]
        } else {
            vec![leaf, below]
        };
        below = gt.add_node(c_sp, children);
    }
    let c1 = gt.graft(&ws.c_micro(1)?);
    let root = gt.add_node(ws.blank, vec![below, c1]);
    gt.set_root(root);

    debug_assert!(f.validate().is_ok());
    debug_assert!(gt.validate().is_ok());

    let mut label_classes = ws.label_classes(ws.alloc.count(), &iota);
    // Macro pair classes.
    let mut next = *label_classes.iter().max().unwrap() + 1;
    for pair in [[a_sp, c_sp], [a_lf, d_sp], [b_sp, c_lf], [b_lf, d_lf]] {
        for l in pair {
            label_classes[l.0 as usize] = next;
        }
        next += 1;
    }

    let stats = BuildStats {
        f_size: f.size(),
        g_size: gt.size(),
        alphabet: ws.alloc.count(),
        d: ws.params.d,
    };
    let key = CliqueKey {
        m: ws.params.m.clone(),
        cap_n,
        k,
        lambda: ws.params.lambda.clone(),
        n,
    };
    Ok(CliqueInstance {
        f,
        g: gt,
        model: ws.reg.to_model(ws.alloc.count()),
        key,
        stats,
        label_classes,
    })
}
