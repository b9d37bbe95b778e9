#include "verdict/encoder.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "verdict/errors.hpp"
#include "verdict/io.hpp"

namespace verdict {

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / kSqrt2)); }

double gelu_grad(double x) {
    double cdf = 0.5 * (1.0 + std::erf(x / kSqrt2));
    double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    return cdf + x * pdf;
}

void softmax_inplace(double* v, int n) {
    double mx = v[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, v[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = std::exp(v[i] - mx);
        sum += v[i];
    }
    for (int i = 0; i < n; ++i) v[i] /= sum;
}

// y = x * w + b with b broadcast over rows; w [in x out], b [1 x out].
Matrix affine(const Matrix& x, const Matrix& w, const Matrix& b) {
    Matrix y = matmul(x, w);
    for (int r = 0; r < y.rows; ++r) {
        double* yr = y.row(r);
        const double* br = b.row(0);
        for (int c = 0; c < y.cols; ++c) yr[c] += br[c];
    }
    return y;
}

Matrix head_slice(const Matrix& m, int head, int d_head) {
    Matrix out(m.rows, d_head);
    for (int r = 0; r < m.rows; ++r) {
        const double* src = m.row(r) + head * d_head;
        double* dst = out.row(r);
        for (int c = 0; c < d_head; ++c) dst[c] = src[c];
    }
    return out;
}

void head_slice_add(Matrix& target, const Matrix& part, int head, int d_head) {
    for (int r = 0; r < target.rows; ++r) {
        double* dst = target.row(r) + head * d_head;
        const double* src = part.row(r);
        for (int c = 0; c < d_head; ++c) dst[c] += src[c];
    }
}

// Layer norm with biased variance. Returns the output and stores xhat and
// 1/std for the backward pass.
Matrix layer_norm(const Matrix& x, const Matrix& gain, const Matrix& bias, Matrix* xhat,
                  std::vector<double>* inv_std) {
    Matrix y(x.rows, x.cols);
    *xhat = Matrix(x.rows, x.cols);
    inv_std->assign(static_cast<std::size_t>(x.rows), 0.0);
    for (int r = 0; r < x.rows; ++r) {
        const double* xr = x.row(r);
        double mean = 0.0;
        for (int c = 0; c < x.cols; ++c) mean += xr[c];
        mean /= x.cols;
        double var = 0.0;
        for (int c = 0; c < x.cols; ++c) {
            double d = xr[c] - mean;
            var += d * d;
        }
        var /= x.cols;
        double istd = 1.0 / std::sqrt(var + kLnEps);
        (*inv_std)[static_cast<std::size_t>(r)] = istd;
        double* hr = xhat->row(r);
        double* yr = y.row(r);
        const double* g = gain.row(0);
        const double* b = bias.row(0);
        for (int c = 0; c < x.cols; ++c) {
            hr[c] = (xr[c] - mean) * istd;
            yr[c] = g[c] * hr[c] + b[c];
        }
    }
    return y;
}

// Given dy of a layer norm output, accumulates dgain/dbias and returns dx.
Matrix layer_norm_backward(const Matrix& dy, const Matrix& xhat,
                           const std::vector<double>& inv_std, const Matrix& gain,
                           Matrix* dgain, Matrix* dbias) {
    Matrix dx(dy.rows, dy.cols);
    int n = dy.cols;
    for (int r = 0; r < dy.rows; ++r) {
        const double* dyr = dy.row(r);
        const double* hr = xhat.row(r);
        const double* g = gain.row(0);
        double* dgr = dgain->row(0);
        double* dbr = dbias->row(0);
        double mean_dxhat = 0.0;
        double mean_dxhat_xhat = 0.0;
        for (int c = 0; c < n; ++c) {
            dgr[c] += dyr[c] * hr[c];
            dbr[c] += dyr[c];
            double dxhat = dyr[c] * g[c];
            mean_dxhat += dxhat;
            mean_dxhat_xhat += dxhat * hr[c];
        }
        mean_dxhat /= n;
        mean_dxhat_xhat /= n;
        double istd = inv_std[static_cast<std::size_t>(r)];
        double* dxr = dx.row(r);
        for (int c = 0; c < n; ++c) {
            double dxhat = dyr[c] * g[c];
            dxr[c] = istd * (dxhat - mean_dxhat - hr[c] * mean_dxhat_xhat);
        }
    }
    return dx;
}

Matrix draw_dropout_mask(int rows, int cols, double rate, Rng& rng) {
    Matrix m(rows, cols);
    double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < m.size(); ++i) {
        m.data[i] = rng.uniform() < rate ? 0.0 : keep_scale;
    }
    return m;
}

void apply_mask(Matrix& x, const Matrix& mask) {
    for (std::size_t i = 0; i < x.size(); ++i) x.data[i] *= mask.data[i];
}

Matrix init_uniform(int rows, int cols, double half_width, Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data[i] = rng.uniform(-half_width, half_width);
    return m;
}

void append_u64le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_i32le(std::string& out, std::int32_t v) {
    auto u = static_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
}

void append_f64le(std::string& out, double v) {
    append_u64le(out, std::bit_cast<std::uint64_t>(v));
}

class ByteReader {
public:
    ByteReader(const std::string& bytes, std::string path)
        : bytes_(bytes), path_(std::move(path)) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }

    std::int32_t i32() {
        const char* p = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
        return static_cast<std::int32_t>(v);
    }

    std::uint64_t u64() {
        const char* p = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    const char* take(std::size_t n) {
        if (bytes_.size() - pos_ < n) throw ParseError(path_ + ": truncated checkpoint");
        const char* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }

    const std::string& bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

struct ForwardOut {
    Prediction pred;
};

// Single forward over the first true_length positions. dropout_rng non-null
// enables dropout; tape non-null retains activations.
ForwardOut forward_impl(const ModelConfig& cfg, const ParamSet& p, const TokenSequence& seq,
                        Rng* dropout_rng, ActivationTape* tape) {
    if (seq.max_len() != cfg.max_len) {
        throw InputError("sequence max_len " + std::to_string(seq.max_len()) +
                         " does not match model max_len " + std::to_string(cfg.max_len));
    }
    int L = seq.true_length;
    if (L < 1 || L > cfg.max_len) throw InputError("invalid true_length");
    int d = cfg.d_model;
    int H = cfg.n_heads;
    int dh = d / H;
    double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    bool use_dropout = dropout_rng != nullptr && cfg.dropout_rate > 0.0;

    Matrix x(L, d);
    for (int l = 0; l < L; ++l) {
        std::int32_t id = seq.ids[static_cast<std::size_t>(l)];
        if (id < 0 || id >= cfg.vocab_size) {
            throw InputError("token id " + std::to_string(id) + " out of range");
        }
        const double* te = p.token_embeddings.row(id);
        const double* pe = p.position_embeddings.row(l);
        double* xr = x.row(l);
        for (int c = 0; c < d; ++c) xr[c] = te[c] + pe[c];
    }
    if (tape) {
        tape->ids.assign(seq.ids.begin(), seq.ids.begin() + L);
        tape->layers.clear();
        tape->layers.reserve(static_cast<std::size_t>(cfg.n_layers));
    }
    if (use_dropout) {
        Matrix m = draw_dropout_mask(L, d, cfg.dropout_rate, *dropout_rng);
        apply_mask(x, m);
        if (tape) tape->emb_drop = std::move(m);
    }

    for (int layer = 0; layer < cfg.n_layers; ++layer) {
        const LayerParams& lp = p.layers[static_cast<std::size_t>(layer)];
        LayerTape lt;
        if (tape) lt.x_in = x;

        Matrix q = affine(x, lp.wq, lp.bq);
        Matrix k = affine(x, lp.wk, lp.bk);
        Matrix v = affine(x, lp.wv, lp.bv);

        Matrix ctx(L, d);
        std::vector<Matrix> attn_heads;
        attn_heads.reserve(static_cast<std::size_t>(H));
        for (int h = 0; h < H; ++h) {
            Matrix qh = head_slice(q, h, dh);
            Matrix kh = head_slice(k, h, dh);
            Matrix vh = head_slice(v, h, dh);
            Matrix scores = matmul_nt(qh, kh);
            for (std::size_t i = 0; i < scores.size(); ++i) scores.data[i] *= scale;
            for (int r = 0; r < L; ++r) softmax_inplace(scores.row(r), L);
            Matrix ch = matmul(scores, vh);
            head_slice_add(ctx, ch, h, dh);
            if (tape) attn_heads.push_back(std::move(scores));
        }
        Matrix attn_out = affine(ctx, lp.wo, lp.bo);
        if (use_dropout) {
            Matrix m = draw_dropout_mask(L, d, cfg.dropout_rate, *dropout_rng);
            apply_mask(attn_out, m);
            if (tape) lt.attn_drop = std::move(m);
        }

        Matrix u1 = x;
        add_into(u1, attn_out);
        Matrix xhat1;
        std::vector<double> istd1;
        Matrix y = layer_norm(u1, lp.ln1_g, lp.ln1_b, &xhat1, &istd1);

        Matrix ffn_pre = affine(y, lp.w1, lp.b1);
        Matrix ffn_act(ffn_pre.rows, ffn_pre.cols);
        for (std::size_t i = 0; i < ffn_pre.size(); ++i) ffn_act.data[i] = gelu(ffn_pre.data[i]);
        Matrix ffn_out = affine(ffn_act, lp.w2, lp.b2);
        if (use_dropout) {
            Matrix m = draw_dropout_mask(L, d, cfg.dropout_rate, *dropout_rng);
            apply_mask(ffn_out, m);
            if (tape) lt.ffn_drop = std::move(m);
        }

        Matrix u2 = y;
        add_into(u2, ffn_out);
        Matrix xhat2;
        std::vector<double> istd2;
        Matrix z = layer_norm(u2, lp.ln2_g, lp.ln2_b, &xhat2, &istd2);

        if (tape) {
            lt.q = std::move(q);
            lt.k = std::move(k);
            lt.v = std::move(v);
            lt.attn = std::move(attn_heads);
            lt.ctx = std::move(ctx);
            lt.ln1_xhat = std::move(xhat1);
            lt.ln1_inv_std = std::move(istd1);
            lt.y = y;
            lt.ffn_pre = std::move(ffn_pre);
            lt.ffn_act = std::move(ffn_act);
            lt.ln2_xhat = std::move(xhat2);
            lt.ln2_inv_std = std::move(istd2);
            tape->layers.push_back(std::move(lt));
        }
        x = std::move(z);
    }

    std::vector<double> pooled(x.row(0), x.row(0) + d);
    std::vector<double> logits(static_cast<std::size_t>(cfg.n_classes), 0.0);
    for (int c = 0; c < cfg.n_classes; ++c) {
        double s = p.head_b.at(0, c);
        for (int j = 0; j < d; ++j) s += pooled[static_cast<std::size_t>(j)] * p.head_w.at(j, c);
        logits[static_cast<std::size_t>(c)] = s;
    }
    softmax_inplace(logits.data(), cfg.n_classes);

    ForwardOut out;
    out.pred.probabilities = logits;
    out.pred.label_index = 0;
    for (int c = 1; c < cfg.n_classes; ++c) {
        if (logits[static_cast<std::size_t>(c)] > logits[static_cast<std::size_t>(out.pred.label_index)]) {
            out.pred.label_index = c;
        }
    }
    if (tape) {
        tape->pooled = pooled;
        tape->probs = out.pred.probabilities;
    }
    return out;
}

// Backward for one element; dlogits already carries the 1/batch factor.
void backward_impl(const ModelConfig& cfg, const ParamSet& p, const ActivationTape& tape,
                   std::vector<double> dlogits, ParamSet* g) {
    int L = static_cast<int>(tape.ids.size());
    int d = cfg.d_model;
    int H = cfg.n_heads;
    int dh = d / H;
    double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    // Head.
    std::vector<double> dpooled(static_cast<std::size_t>(d), 0.0);
    for (int c = 0; c < cfg.n_classes; ++c) {
        double dl = dlogits[static_cast<std::size_t>(c)];
        g->head_b.at(0, c) += dl;
        for (int j = 0; j < d; ++j) {
            g->head_w.at(j, c) += tape.pooled[static_cast<std::size_t>(j)] * dl;
            dpooled[static_cast<std::size_t>(j)] += p.head_w.at(j, c) * dl;
        }
    }

    Matrix dz(L, d);
    for (int j = 0; j < d; ++j) dz.at(0, j) = dpooled[static_cast<std::size_t>(j)];

    for (int layer = cfg.n_layers - 1; layer >= 0; --layer) {
        const LayerParams& lp = p.layers[static_cast<std::size_t>(layer)];
        LayerParams& lg = g->layers[static_cast<std::size_t>(layer)];
        const LayerTape& lt = tape.layers[static_cast<std::size_t>(layer)];

        // LN2: dz -> du2; residual u2 = y + dropout(ffn_out).
        Matrix du2 = layer_norm_backward(dz, lt.ln2_xhat, lt.ln2_inv_std, lp.ln2_g,
                                         &lg.ln2_g, &lg.ln2_b);
        Matrix dy = du2;
        Matrix dffn_out = std::move(du2);
        if (lt.ffn_drop.rows > 0) apply_mask(dffn_out, lt.ffn_drop);

        // ffn_out = gelu(y*w1+b1)*w2 + b2
        add_into(lg.w2, matmul_tn(lt.ffn_act, dffn_out));
        for (int r = 0; r < L; ++r) {
            const double* dr = dffn_out.row(r);
            double* b2r = lg.b2.row(0);
            for (int c = 0; c < d; ++c) b2r[c] += dr[c];
        }
        Matrix dffn_act = matmul_nt(dffn_out, lp.w2);
        Matrix dffn_pre = std::move(dffn_act);
        for (std::size_t i = 0; i < dffn_pre.size(); ++i) {
            dffn_pre.data[i] *= gelu_grad(lt.ffn_pre.data[i]);
        }
        add_into(lg.w1, matmul_tn(lt.y, dffn_pre));
        for (int r = 0; r < L; ++r) {
            const double* dr = dffn_pre.row(r);
            double* b1r = lg.b1.row(0);
            for (int c = 0; c < cfg.d_ff; ++c) b1r[c] += dr[c];
        }
        add_into(dy, matmul_nt(dffn_pre, lp.w1));

        // LN1: dy -> du1; residual u1 = x_in + dropout(attn_out).
        Matrix du1 = layer_norm_backward(dy, lt.ln1_xhat, lt.ln1_inv_std, lp.ln1_g,
                                         &lg.ln1_g, &lg.ln1_b);
        Matrix dx = du1;
        Matrix dattn_out = std::move(du1);
        if (lt.attn_drop.rows > 0) apply_mask(dattn_out, lt.attn_drop);

        // attn_out = ctx*wo + bo
        add_into(lg.wo, matmul_tn(lt.ctx, dattn_out));
        for (int r = 0; r < L; ++r) {
            const double* dr = dattn_out.row(r);
            double* bor = lg.bo.row(0);
            for (int c = 0; c < d; ++c) bor[c] += dr[c];
        }
        Matrix dctx = matmul_nt(dattn_out, lp.wo);

        Matrix dq(L, d), dk(L, d), dv(L, d);
        for (int h = 0; h < H; ++h) {
            Matrix dch = head_slice(dctx, h, dh);
            const Matrix& probs = lt.attn[static_cast<std::size_t>(h)];
            Matrix vh = head_slice(lt.v, h, dh);
            Matrix qh = head_slice(lt.q, h, dh);
            Matrix kh = head_slice(lt.k, h, dh);

            Matrix dprobs = matmul_nt(dch, vh);
            Matrix dvh = matmul_tn(probs, dch);

            // softmax rows
            Matrix dscores(L, L);
            for (int r = 0; r < L; ++r) {
                const double* pr = probs.row(r);
                const double* dpr = dprobs.row(r);
                double dot = 0.0;
                for (int c = 0; c < L; ++c) dot += pr[c] * dpr[c];
                double* dsr = dscores.row(r);
                for (int c = 0; c < L; ++c) dsr[c] = pr[c] * (dpr[c] - dot);
            }
            for (std::size_t i = 0; i < dscores.size(); ++i) dscores.data[i] *= scale;

            head_slice_add(dq, matmul(dscores, kh), h, dh);
            head_slice_add(dk, matmul_tn(dscores, qh), h, dh);
            head_slice_add(dv, dvh, h, dh);
        }

        // q = x*wq + bq etc.
        add_into(lg.wq, matmul_tn(lt.x_in, dq));
        add_into(lg.wk, matmul_tn(lt.x_in, dk));
        add_into(lg.wv, matmul_tn(lt.x_in, dv));
        for (int r = 0; r < L; ++r) {
            for (int c = 0; c < d; ++c) {
                lg.bq.at(0, c) += dq.at(r, c);
                lg.bk.at(0, c) += dk.at(r, c);
                lg.bv.at(0, c) += dv.at(r, c);
            }
        }
        add_into(dx, matmul_nt(dq, lp.wq));
        add_into(dx, matmul_nt(dk, lp.wk));
        add_into(dx, matmul_nt(dv, lp.wv));

        dz = std::move(dx);
    }

    if (tape.emb_drop.rows > 0) apply_mask(dz, tape.emb_drop);
    for (int l = 0; l < L; ++l) {
        std::int32_t id = tape.ids[static_cast<std::size_t>(l)];
        const double* dr = dz.row(l);
        double* te = g->token_embeddings.row(id);
        double* pe = g->position_embeddings.row(l);
        for (int c = 0; c < d; ++c) {
            te[c] += dr[c];
            pe[c] += dr[c];
        }
    }
}

}  // namespace

void ModelConfig::validate() const {
    if (vocab_size < 5) throw ConfigError("vocab_size must be at least 5");
    if (max_len < 3) throw ConfigError("max_len must be at least 3");
    if (d_model < 1 || n_heads < 1 || n_layers < 1 || d_ff < 1) {
        throw ConfigError("model dimensions must be at least 1");
    }
    if (d_model % n_heads != 0) throw ConfigError("d_model must be divisible by n_heads");
    if (n_classes != 2 && n_classes != 5) throw ConfigError("n_classes must be 2 or 5");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw ConfigError("dropout_rate must be in [0, 1)");
    }
}

ParamSet ParamSet::zeros_like(const ModelConfig& cfg) {
    ParamSet p;
    p.token_embeddings = Matrix(cfg.vocab_size, cfg.d_model);
    p.position_embeddings = Matrix(cfg.max_len, cfg.d_model);
    p.layers.resize(static_cast<std::size_t>(cfg.n_layers));
    for (LayerParams& lp : p.layers) {
        lp.wq = Matrix(cfg.d_model, cfg.d_model);
        lp.bq = Matrix(1, cfg.d_model);
        lp.wk = Matrix(cfg.d_model, cfg.d_model);
        lp.bk = Matrix(1, cfg.d_model);
        lp.wv = Matrix(cfg.d_model, cfg.d_model);
        lp.bv = Matrix(1, cfg.d_model);
        lp.wo = Matrix(cfg.d_model, cfg.d_model);
        lp.bo = Matrix(1, cfg.d_model);
        lp.ln1_g = Matrix(1, cfg.d_model);
        lp.ln1_b = Matrix(1, cfg.d_model);
        lp.ln2_g = Matrix(1, cfg.d_model);
        lp.ln2_b = Matrix(1, cfg.d_model);
        lp.w1 = Matrix(cfg.d_model, cfg.d_ff);
        lp.b1 = Matrix(1, cfg.d_ff);
        lp.w2 = Matrix(cfg.d_ff, cfg.d_model);
        lp.b2 = Matrix(1, cfg.d_model);
    }
    p.head_w = Matrix(cfg.d_model, cfg.n_classes);
    p.head_b = Matrix(1, cfg.n_classes);
    return p;
}

std::vector<Matrix*> tensor_list(ParamSet& p) {
    std::vector<Matrix*> out;
    out.push_back(&p.token_embeddings);
    out.push_back(&p.position_embeddings);
    for (LayerParams& lp : p.layers) {
        out.push_back(&lp.wq);
        out.push_back(&lp.wk);
        out.push_back(&lp.wv);
        out.push_back(&lp.wo);
        out.push_back(&lp.bq);
        out.push_back(&lp.bk);
        out.push_back(&lp.bv);
        out.push_back(&lp.bo);
        out.push_back(&lp.ln1_g);
        out.push_back(&lp.ln1_b);
        out.push_back(&lp.ln2_g);
        out.push_back(&lp.ln2_b);
        out.push_back(&lp.w1);
        out.push_back(&lp.b1);
        out.push_back(&lp.w2);
        out.push_back(&lp.b2);
    }
    out.push_back(&p.head_w);
    out.push_back(&p.head_b);
    return out;
}

std::vector<const Matrix*> tensor_list(const ParamSet& p) {
    auto mut = tensor_list(const_cast<ParamSet&>(p));
    return {mut.begin(), mut.end()};
}

std::vector<std::string> tensor_names(const ModelConfig& cfg) {
    std::vector<std::string> names = {"token_embeddings", "position_embeddings"};
    for (int l = 0; l < cfg.n_layers; ++l) {
        std::string prefix = "layer" + std::to_string(l) + ".";
        for (const char* n : {"wq", "wk", "wv", "wo", "bq", "bk", "bv", "bo", "ln1_g", "ln1_b",
                              "ln2_g", "ln2_b", "w1", "b1", "w2", "b2"}) {
            names.push_back(prefix + n);
        }
    }
    names.push_back("head_w");
    names.push_back("head_b");
    return names;
}

ClassifierModel init_model(const ModelConfig& config, std::int64_t seed) {
    config.validate();
    ClassifierModel m;
    m.config = config;
    m.seed = seed;
    m.params = ParamSet::zeros_like(config);
    m.dropout_rng = Rng(static_cast<std::uint64_t>(seed), /*stream_tag=*/0x64726f70);

    Rng rng(static_cast<std::uint64_t>(seed));
    // Uniform with std 0.02 for embeddings: half-width 0.02 * sqrt(3).
    double emb_hw = 0.02 * std::sqrt(3.0);
    m.params.token_embeddings = init_uniform(config.vocab_size, config.d_model, emb_hw, rng);
    m.params.position_embeddings = init_uniform(config.max_len, config.d_model, emb_hw, rng);
    auto glorot = [](int fan_in, int fan_out) {
        return std::sqrt(6.0 / (fan_in + fan_out));
    };
    for (LayerParams& lp : m.params.layers) {
        double hw_sq = glorot(config.d_model, config.d_model);
        lp.wq = init_uniform(config.d_model, config.d_model, hw_sq, rng);
        lp.wk = init_uniform(config.d_model, config.d_model, hw_sq, rng);
        lp.wv = init_uniform(config.d_model, config.d_model, hw_sq, rng);
        lp.wo = init_uniform(config.d_model, config.d_model, hw_sq, rng);
        lp.ln1_g.fill(1.0);
        lp.ln2_g.fill(1.0);
        lp.w1 = init_uniform(config.d_model, config.d_ff, glorot(config.d_model, config.d_ff), rng);
        lp.w2 = init_uniform(config.d_ff, config.d_model, glorot(config.d_ff, config.d_model), rng);
    }
    m.params.head_w = init_uniform(config.d_model, config.n_classes,
                                   glorot(config.d_model, config.n_classes), rng);
    return m;
}

Prediction forward(ClassifierModel& model, const TokenSequence& seq, bool train_mode,
                   ActivationTape* tape) {
    Rng* rng = train_mode ? &model.dropout_rng : nullptr;
    return forward_impl(model.config, model.params, seq, rng, tape).pred;
}

Prediction predict(const ClassifierModel& model, const TokenSequence& seq) {
    return forward_impl(model.config, model.params, seq, nullptr, nullptr).pred;
}

double loss_and_grad(ClassifierModel& model,
                     const std::vector<std::pair<TokenSequence, int>>& batch,
                     ParamSet* grads) {
    if (batch.empty()) throw InputError("loss_and_grad: empty batch");
    const ModelConfig& cfg = model.config;
    *grads = ParamSet::zeros_like(cfg);
    double inv_b = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (const auto& [seq, label] : batch) {
        if (label < 0 || label >= cfg.n_classes) {
            throw InputError("label index " + std::to_string(label) + " out of range");
        }
        ActivationTape tape;
        Rng* rng = cfg.dropout_rate > 0.0 ? &model.dropout_rng : nullptr;
        forward_impl(cfg, model.params, seq, rng, &tape);
        double p_gold = tape.probs[static_cast<std::size_t>(label)];
        loss += -std::log(p_gold) * inv_b;
        std::vector<double> dlogits = tape.probs;
        dlogits[static_cast<std::size_t>(label)] -= 1.0;
        for (double& v : dlogits) v *= inv_b;
        backward_impl(cfg, model.params, tape, std::move(dlogits), grads);
    }
    if (!std::isfinite(loss)) {
        throw NumericalError("non-finite loss (" + std::to_string(loss) + ") over batch of " +
                             std::to_string(batch.size()));
    }
    return loss;
}

void save_checkpoint(const ClassifierModel& model, const std::string& path) {
    std::string out;
    out.push_back(static_cast<char>(1));  // version
    const ModelConfig& c = model.config;
    append_i32le(out, c.vocab_size);
    append_i32le(out, c.max_len);
    append_i32le(out, c.d_model);
    append_i32le(out, c.n_heads);
    append_i32le(out, c.n_layers);
    append_i32le(out, c.d_ff);
    append_i32le(out, c.n_classes);
    append_f64le(out, c.dropout_rate);
    append_u64le(out, static_cast<std::uint64_t>(model.seed));
    for (const Matrix* t : tensor_list(model.params)) {
        for (double v : t->data) append_f64le(out, v);
    }
    atomic_write_file(path, out);
}

ClassifierModel load_checkpoint(const std::string& path) {
    std::string bytes = read_file(path);
    ByteReader r(bytes, path);
    std::uint8_t version = r.u8();
    if (version != 1) {
        throw ParseError(path + ": unsupported checkpoint version " + std::to_string(version));
    }
    ModelConfig c;
    c.vocab_size = r.i32();
    c.max_len = r.i32();
    c.d_model = r.i32();
    c.n_heads = r.i32();
    c.n_layers = r.i32();
    c.d_ff = r.i32();
    c.n_classes = r.i32();
    c.dropout_rate = r.f64();
    std::int64_t seed = static_cast<std::int64_t>(r.u64());
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ParseError(path + ": invalid checkpoint header: " + e.what());
    }
    ClassifierModel m;
    m.config = c;
    m.seed = seed;
    m.params = ParamSet::zeros_like(c);
    m.dropout_rng = Rng(static_cast<std::uint64_t>(seed), /*stream_tag=*/0x64726f70);
    for (Matrix* t : tensor_list(m.params)) {
        for (double& v : t->data) v = r.f64();
    }
    if (!r.exhausted()) throw ParseError(path + ": trailing bytes in checkpoint");
    return m;
}

}  // namespace verdict
