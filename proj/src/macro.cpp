#include "invasion/macro.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "invasion/diffusion.hpp"
#include "invasion/effects.hpp"

namespace invasion {

double Speeds::max() const { return std::max({c_x, c_y, m1_x, m1_y, m2_x, m2_y}); }

NutrientParams nutrient_params(const ModelParams& p) {
    NutrientParams n;
    n.D_sigma = p.D_sigma;
    n.d_sigma = p.d_sigma;
    n.sigma_nor = p.sigma_nor;
    n.sor_omega = p.sor_omega;
    n.sor_tol = p.sor_tol;
    n.max_iters = p.sor_max_iters;
    return n;
}

MacroContext make_context(const MacroGrid& grid, const DomainMask& mask, const ModelParams& params,
                          const SensingKernels& kernels, double stage_time, std::uint64_t seed) {
    MacroContext ctx;
    ctx.grid = &grid;
    ctx.mask = &mask;
    ctx.params = &params;
    ctx.kernels = &kernels;
    ctx.weno = params.weno(seed);
    ctx.influx = mollify_indicator(mask.outer, grid, params.rho_influx);
    ctx.repolarisation = mollify_indicator(repolarisation_mask(mask, grid, params.R_p), grid, params.rho_repol);
    for (std::size_t k = 0; k < ctx.influx.size(); ++k) {
        ctx.influx[k] = mask.inside[k] ? params.M_0 * ctx.influx[k] : 0.0;
        if (!mask.inside[k]) ctx.repolarisation[k] = 0.0;
    }
    ctx.repolarisation_on = stage_time >= params.t_p - 1e-9 * params.dt_stage;
    return ctx;
}

Field diffusion_coeff_c(const TumourState& u, const ModelParams& p) {
    Field D(u.n());
    for (std::size_t k = 0; k < D.size(); ++k)
        D[k] = std::max(0.0, p.D_c * (1.0 + p.D_cM2 * u.m2[k] + p.D_cF * u.f[k] - p.D_cM1 * u.m1[k]));
    return D;
}

Field diffusion_coeff_M(const TumourState& u, const ModelParams& p) {
    Field D(u.n());
    for (std::size_t k = 0; k < D.size(); ++k) D[k] = p.D_M * (1.0 + p.D_MF * u.f[k]);
    return D;
}

SourceTerms source_terms(const TumourState& u, const MacroContext& ctx) {
    const ModelParams& p = *ctx.params;
    const EffectParams ep = p.effects();
    const int n = u.n();
    SourceTerms s{Field(n), Field(n), Field(n), Field(n), Field(n), Field(n),
                  Field(n), Field(n), Field(n), Field(n), Field(n)};
    const Mask& in = ctx.mask->inside;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n * n; ++k) {
        if (!in[k]) continue;
        const double sig = std::max(0.0, u.sigma[k]);
        const double c = u.c[k], m1 = u.m1[k], m2 = u.m2[k], l = u.l[k], f = u.f[k];
        const double room = std::max(0.0, 1.0 - u.rho(k));
        const double pp = psi_p(sig, ep);
        s.P_c[k] = p.mu_c * pp * std::max(0.0, 1.0 - p.mu_cM1 * m1 + p.mu_cM2 * m2) * c * room;
        s.Q_c[k] = p.d_c * (psi_dc(sig, ep) + p.d_cM1 * m1) * c;
        const double grow = p.mu_M * pp * (1.0 + p.mu_MF * f) * c * room;
        s.P_M1[k] = grow * m1;
        s.P_M2[k] = grow * m2;
        const double die = p.d_M * psi_dM(sig, ep);
        s.Q_M1[k] = die * m1;
        s.Q_M2[k] = die * m2;
        s.T_12[k] = p.p_12 * psi_M(sig, ep) * c * m1;
        s.T_21[k] = ctx.repolarisation_on ? p.p_21 * m2 * ctx.repolarisation[k] : 0.0;
        s.M_I[k] = ctx.influx[k];
        s.l[k] = -l * (p.beta_lc * c + p.beta_lM1 * m1 + p.beta_lM2 * m2) + (p.gamma_0 + p.gamma_M2 * m2) * room;
        s.f[k] = -f * (p.beta_Fc * c + p.beta_FM1 * m1 + p.beta_FM2 * m2);
    }
    return s;
}

AdhesionFluxes adhesion_fluxes(const TumourState& u, const MacroContext& ctx) {
    const AdhesionStrengths st = ctx.params->strengths();
    const VectorField Ac = adhesion_c(u, *ctx.kernels, st, *ctx.mask, ctx.adhesion);
    const auto AM = adhesion_M_pair(u, *ctx.kernels, st, *ctx.mask, ctx.adhesion);
    const int n = u.n();
    AdhesionFluxes F{VectorField(n), VectorField(n), VectorField(n)};
    for (std::size_t k = 0; k < u.c.size(); ++k) {
        F.c.x[k] = u.c[k] * Ac.x[k];
        F.c.y[k] = u.c[k] * Ac.y[k];
        F.m1.x[k] = u.m1[k] * AM[0].x[k];
        F.m1.y[k] = u.m1[k] * AM[0].y[k];
        F.m2.x[k] = u.m2[k] * AM[1].x[k];
        F.m2.y[k] = u.m2[k] * AM[1].y[k];
    }
    return F;
}

Speeds propagation_speeds(const TumourState& u, const MacroContext& ctx, SpeedMemory* memory) {
    const Mask& in = ctx.mask->inside;
    std::vector<int> nodes;
    for (std::size_t k = 0; k < in.size(); ++k)
        if (in[k]) nodes.push_back(static_cast<int>(k));

    std::vector<std::vector<double>> warm(6);
    if (memory) {
        std::unordered_map<int, std::size_t> where;
        for (std::size_t q = 0; q < memory->nodes.size(); ++q) where[memory->nodes[q]] = q;
        for (int s = 0; s < 6; ++s) {
            if (memory->vectors[s].size() != memory->nodes.size()) continue;
            warm[s].assign(nodes.size(), 0.0);
            for (std::size_t q = 0; q < nodes.size(); ++q) {
                auto it = where.find(nodes[q]);
                if (it != where.end()) warm[s][q] = memory->vectors[s][it->second];
            }
        }
    }

    const AdhesionStrengths st = ctx.params->strengths();
    Speeds out;
    double* slots[6] = {&out.c_x, &out.c_y, &out.m1_x, &out.m1_y, &out.m2_x, &out.m2_y};
    for (int comp = 0; comp < 3; ++comp) {
        Field TumourState::*field = comp == 0 ? &TumourState::c : comp == 1 ? &TumourState::m1 : &TumourState::m2;
        std::vector<double> base(nodes.size());
        for (std::size_t q = 0; q < nodes.size(); ++q) base[q] = (u.*field)[nodes[q]];
        for (int dir = 0; dir < 2; ++dir) {
            FluxMap map = [&, comp, dir, field](const std::vector<double>& v) {
                TumourState w = u;
                for (std::size_t q = 0; q < nodes.size(); ++q) (w.*field)[nodes[q]] = v[q];
                VectorField A = comp == 0 ? adhesion_c(w, *ctx.kernels, st, *ctx.mask, ctx.adhesion)
                                          : adhesion_M(w, *ctx.kernels, comp == 1 ? st.S_M1M : st.S_M2M, st,
                                                       *ctx.mask, ctx.adhesion);
                const Field& a = dir == 0 ? A.x : A.y;
                std::vector<double> r(nodes.size());
                for (std::size_t q = 0; q < nodes.size(); ++q) r[q] = v[q] * a[nodes[q]];
                return r;
            };
            const int slot = comp * 2 + dir;
            WenoConfig cfg = ctx.weno;
            cfg.seed = ctx.weno.seed + static_cast<std::uint64_t>(slot);
            const std::vector<double>* start = warm[slot].empty() ? nullptr : &warm[slot];
            SpectralEstimate e = spectral_radius(map, base, cfg, start);
            *slots[slot] = e.value;
            out.capped += e.capped ? 1 : 0;
            if (memory) memory->vectors[slot] = std::move(e.vector);
        }
    }
    if (memory) memory->nodes = nodes;
    return out;
}

namespace {

Field divergence(const VectorField& F, const Field& u, double ax, double ay, const MacroContext& ctx) {
    const double h = ctx.grid->h;
    Field a = weno_divergence_inside(F.x, F.y, u, ax, ay, *ctx.mask, h, ctx.weno);
    const Field b = weno_divergence_layer(F.x, F.y, u, ax, ay, *ctx.mask, h, ctx.weno);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
}

}  // namespace

Tendencies rhs(const TumourState& u, const MacroContext& ctx, const Speeds& alpha) {
    const ModelParams& p = *ctx.params;
    const DomainMask& mask = *ctx.mask;
    const double h = ctx.grid->h;
    const SourceTerms s = source_terms(u, ctx);
    const AdhesionFluxes F = adhesion_fluxes(u, ctx);
    const Field Dc = diffusion_coeff_c(u, p), DM = diffusion_coeff_M(u, p);

    Tendencies t{diffusion(Dc, u.c, mask, h), diffusion(DM, u.m1, mask, h), diffusion(DM, u.m2, mask, h),
                 s.l, s.f};
    const Field dc = divergence(F.c, u.c, alpha.c_x, alpha.c_y, ctx);
    const Field d1 = divergence(F.m1, u.m1, alpha.m1_x, alpha.m1_y, ctx);
    const Field d2 = divergence(F.m2, u.m2, alpha.m2_x, alpha.m2_y, ctx);
    for (std::size_t k = 0; k < t.c.size(); ++k) {
        if (!mask.inside[k]) {
            t.c[k] = t.m1[k] = t.m2[k] = 0.0;
            continue;
        }
        t.c[k] += -dc[k] + s.P_c[k] - s.Q_c[k];
        t.m1[k] += -d1[k] + s.P_M1[k] - s.Q_M1[k] - s.T_12[k] + s.T_21[k] + s.M_I[k];
        t.m2[k] += -d2[k] + s.P_M2[k] - s.Q_M2[k] + s.T_12[k] - s.T_21[k];
    }
    return t;
}

int choose_substeps(const TumourState& u, const MacroContext& ctx, const Speeds& alpha, double dt_stage) {
    const ModelParams& p = *ctx.params;
    const AdhesionStrengths st = p.strengths();
    const VectorField Ac = adhesion_c(u, *ctx.kernels, st, *ctx.mask, ctx.adhesion);
    const auto AM = adhesion_M_pair(u, *ctx.kernels, st, *ctx.mask, ctx.adhesion);
    const Field Dc = diffusion_coeff_c(u, p), DM = diffusion_coeff_M(u, p);
    double speed = alpha.max(), dmax = 0.0;
    for (std::size_t k = 0; k < u.c.size(); ++k) {
        if (!ctx.mask->inside[k]) continue;
        speed = std::max({speed, std::hypot(Ac.x[k], Ac.y[k]), std::hypot(AM[0].x[k], AM[0].y[k]),
                          std::hypot(AM[1].x[k], AM[1].y[k])});
        dmax = std::max({dmax, Dc[k], DM[k]});
    }
    const double h = ctx.grid->h;
    int steps = std::max(1, p.min_substeps);
    if (speed > 0.0) steps = std::max(steps, static_cast<int>(std::ceil(dt_stage * speed / (p.cfl_adv * h))));
    if (dmax > 0.0) steps = std::max(steps, static_cast<int>(std::ceil(dt_stage * dmax / (p.cfl_diff * h * h))));
    return steps;
}

namespace {

double clip(Field& f) {
    double removed = 0.0;
    for (double& v : f.data)
        if (v < 0.0) {
            removed -= v;
            v = 0.0;
        }
    return removed;
}

void guard(const TumourState& u, double limit, int substep) {
    const std::pair<const char*, const Field*> fields[] = {
        {"c", &u.c}, {"m1", &u.m1}, {"m2", &u.m2}, {"l", &u.l}, {"f", &u.f}};
    for (const auto& [name, f] : fields)
        for (std::size_t k = 0; k < f->size(); ++k)
            if (!((*f)[k] <= limit)) {
                std::ostringstream msg;
                msg << "blow-up: field " << name << " = " << (*f)[k] << " at node (" << k % f->n << ", "
                    << k / f->n << ") in substep " << substep;
                throw BlowUpError(msg.str());
            }
}

void axpy(TumourState& out, const TumourState& u, const Tendencies& a, double wa, const Tendencies* b, double wb) {
    const std::pair<Field TumourState::*, Field Tendencies::*> pairs[] = {
        {&TumourState::c, &Tendencies::c}, {&TumourState::m1, &Tendencies::m1}, {&TumourState::m2, &Tendencies::m2},
        {&TumourState::l, &Tendencies::l}, {&TumourState::f, &Tendencies::f}};
    for (const auto& [sf, tf] : pairs) {
        Field& o = out.*sf;
        const Field& x = u.*sf;
        const Field& da = a.*tf;
        for (std::size_t k = 0; k < o.size(); ++k)
            o[k] = b ? x[k] + wa * da[k] + wb * ((*b).*tf)[k] : x[k] + wa * da[k];
    }
}

}  // namespace

TumourState step_stage(const TumourState& u0, const MacroContext& ctx, const Speeds& alpha, double dt_stage,
                       int substeps, StageDiagnostics* diag) {
    if (!(dt_stage > 0.0) || substeps < 1) throw ConfigError("step_stage: need dt_stage > 0 and substeps >= 1");
    const ModelParams& p = *ctx.params;
    const double dt = dt_stage / substeps;
    const double cell = ctx.grid->h * ctx.grid->h;
    const NutrientParams np = nutrient_params(p);
    StageDiagnostics local;
    StageDiagnostics& d = diag ? *diag : local;
    d = StageDiagnostics{};
    d.substeps = substeps;
    d.sigma_min = p.sigma_nor;
    d.sigma_max = 0.0;

    TumourState u = u0;
    for (int step = 0; step < substeps; ++step) {
        NutrientSolution ns = solve_sigma(u, *ctx.mask, np, u.sigma, ctx.grid->h);
        u.sigma = std::move(ns.sigma);
        d.sor_iterations += ns.stats.iterations;
        for (std::size_t k = 0; k < u.sigma.size(); ++k)
            if (ctx.mask->inside[k]) {
                d.sigma_min = std::min(d.sigma_min, u.sigma[k]);
                d.sigma_max = std::max(d.sigma_max, u.sigma[k]);
            }

        const Tendencies k1 = rhs(u, ctx, alpha);
        TumourState pred = u;
        axpy(pred, u, k1, dt, nullptr, 0.0);
        for (Field* f : {&pred.c, &pred.m1, &pred.m2, &pred.l, &pred.f}) clip(*f);
        const Tendencies k2 = rhs(pred, ctx, alpha);
        TumourState next = u;
        axpy(next, u, k1, 0.5 * dt, &k2, 0.5 * dt);
        double removed = 0.0;
        for (Field* f : {&next.c, &next.m1, &next.m2, &next.l, &next.f}) removed += clip(*f);
        d.clipped_mass += removed * cell;
        guard(next, p.blowup, step);
        u = std::move(next);
    }
    for (std::size_t k = 0; k < u.c.size(); ++k)
        if (ctx.mask->inside[k]) d.max_rho = std::max(d.max_rho, u.rho(k));
    return u;
}

}  // namespace invasion
