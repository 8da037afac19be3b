// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "momentkit/metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace momentkit::metrics {

namespace {

constexpr double kThresholdTol = 1e-12;

bool reaches(double value, double threshold) { return value >= threshold - kThresholdTol; }

}  // namespace

double iou(const FrameSpan& a, const FrameSpan& b) {
    if (a.is_point() || b.is_point()) return a == b ? 1.0 : 0.0;
    const int inter = std::max(0, std::min(a.end_index, b.end_index) - std::max(a.start_index, b.start_index));
    const int uni = std::max(a.end_index, b.end_index) - std::min(a.start_index, b.start_index);
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double GroundingResult::recall_at(double threshold) const {
    for (const auto& [t, r] : recall) {
        if (std::abs(t - threshold) < 1e-12) return r;
    }
    throw Error(ErrorCode::invalid_argument, "threshold not evaluated");
}

nlohmann::json GroundingResult::to_json() const {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [t, v] : recall) {
        char key[32];
        std::snprintf(key, sizeof(key), "R@%.1f", t);
        r[key] = v;
    }
    return nlohmann::json{{"recall", std::move(r)},
                          {"mIoU", miou},
                          {"sample_count", sample_count},
                          {"excluded_count", excluded_count}};
}

GroundingResult grounding_metrics(std::span<const GroundingPair> pairs, std::span<const double> thresholds) {
    GroundingResult out;
    std::vector<std::size_t> hits(thresholds.size(), 0);
    double iou_sum = 0.0;
    for (const auto& [pred, gt] : pairs) {
        if (!pred) {
            ++out.excluded_count;
            continue;
        }
        const double v = iou(*pred, gt);
        iou_sum += v;
        ++out.sample_count;
        for (std::size_t k = 0; k < thresholds.size(); ++k) {
            if (reaches(v, thresholds[k])) ++hits[k];
        }
    }
    if (out.sample_count == 0) {
        throw EmptyEvaluation("grounding evaluation has no parseable predictions", pairs.size(),
                              out.excluded_count);
    }
    const double n = static_cast<double>(out.sample_count);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        out.recall.emplace_back(thresholds[k], static_cast<double>(hits[k]) / n);
    }
    out.miou = iou_sum / n;
    return out;
}

std::vector<std::string> caption_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

namespace {

bool is_consonant(const std::string& w, std::size_t i) {
    switch (w[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u': return false;
        case 'y': return i == 0 || !is_consonant(w, i - 1);
        default: return true;
    }
}

// Number of VC sequences in w[0..len).
int measure(const std::string& w, std::size_t len) {
    int m = 0;
    std::size_t i = 0;
    while (i < len && is_consonant(w, i)) ++i;
    while (i < len) {
        while (i < len && !is_consonant(w, i)) ++i;
        if (i >= len) break;
        while (i < len && is_consonant(w, i)) ++i;
        ++m;
    }
    return m;
}

bool has_vowel(const std::string& w, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        if (!is_consonant(w, i)) return true;
    }
    return false;
}

bool ends_with(const std::string& w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool ends_cvc(const std::string& w) {
    const std::size_t n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
    const char last = w[n - 1];
    return last != 'w' && last != 'x' && last != 'y';
}

}  // namespace

std::string stem(std::string_view word) {
    std::string w;
    for (char c : word) w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (w.size() <= 2) return w;

    // Plurals.
    if (ends_with(w, "sses")) w.resize(w.size() - 2);
    else if (ends_with(w, "ies")) w.replace(w.size() - 3, 3, "i");
    else if (!ends_with(w, "ss") && ends_with(w, "s")) w.pop_back();

    // -eed / -ed / -ing.
    if (ends_with(w, "eed")) {
        if (measure(w, w.size() - 3) > 0) w.pop_back();
        return w;
    }
    std::size_t cut = 0;
    if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) cut = 2;
    else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) cut = 3;
    if (cut == 0) return w;
    w.resize(w.size() - cut);
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w.push_back('e');
    } else if (w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1) &&
               w.back() != 'l' && w.back() != 's' && w.back() != 'z') {
        w.pop_back();
    } else if (measure(w, w.size()) == 1 && ends_cvc(w)) {
        w.push_back('e');
    }
    return w;
}

// ---------------------------------------------------------------------------
// CIDEr

namespace {

using NgramCounts = std::unordered_map<std::string, double>;

std::array<NgramCounts, 4> ngram_counts(const std::vector<std::string>& tokens) {
    std::array<NgramCounts, 4> out;
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string g = tokens[i];
            for (std::size_t k = 1; k < n; ++k) {
                g += ' ';
                g += tokens[i + k];
            }
            out[n - 1][g] += 1.0;
        }
    }
    return out;
}

struct TfIdf {
    std::array<NgramCounts, 4> weights;
    std::array<double, 4> norms{};
};

TfIdf tf_idf(const std::array<NgramCounts, 4>& counts,
             const std::unordered_map<std::string, double>& df, double log_docs) {
    TfIdf v;
    for (std::size_t n = 0; n < 4; ++n) {
        double sq = 0.0;
        for (const auto& [g, tf] : counts[n]) {
            const auto it = df.find(g);
            const double d = it == df.end() ? 1.0 : std::max(1.0, it->second);
            const double w = tf * (log_docs - std::log(d));
            v.weights[n][g] = w;
            sq += w * w;
        }
        v.norms[n] = std::sqrt(sq);
    }
    return v;
}

double clipped_cosine(const TfIdf& cand, const TfIdf& ref, std::size_t n) {
    if (cand.norms[n] == 0.0 || ref.norms[n] == 0.0) return 0.0;
    double dot = 0.0;
    for (const auto& [g, wc] : cand.weights[n]) {
        const auto it = ref.weights[n].find(g);
        if (it == ref.weights[n].end()) continue;
        dot += std::min(wc, it->second) * it->second;
    }
    return dot / (cand.norms[n] * ref.norms[n]);
}

}  // namespace

std::vector<double> cider_scores(std::span<const std::string> candidates,
                                 std::span<const std::vector<std::string>> reference_sets) {
    if (candidates.size() != reference_sets.size()) {
        throw Error(ErrorCode::invalid_argument, "candidate and reference counts differ");
    }
    if (candidates.empty()) throw EmptyEvaluation("CIDEr over an empty corpus", 0, 0);

    // Pass 1: document frequencies over reference sets.
    std::vector<std::vector<std::array<NgramCounts, 4>>> ref_counts(reference_sets.size());
    std::unordered_map<std::string, double> df;
    for (std::size_t i = 0; i < reference_sets.size(); ++i) {
        std::unordered_set<std::string> seen;
        for (const std::string& ref : reference_sets[i]) {
            ref_counts[i].push_back(ngram_counts(caption_tokens(ref)));
            for (const auto& per_n : ref_counts[i].back()) {
                for (const auto& [g, c] : per_n) seen.insert(g);
            }
        }
        for (const std::string& g : seen) df[g] += 1.0;
    }
    const double log_docs = std::log(static_cast<double>(reference_sets.size()) + 1.0);

    // Pass 2: score.
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (ref_counts[i].empty()) continue;
        const TfIdf cand = tf_idf(ngram_counts(caption_tokens(candidates[i])), df, log_docs);
        double total = 0.0;
        for (const auto& rc : ref_counts[i]) {
            const TfIdf ref = tf_idf(rc, df, log_docs);
            double s = 0.0;
            for (std::size_t n = 0; n < 4; ++n) s += clipped_cosine(cand, ref, n);
            total += s / 4.0;
        }
        scores[i] = 10.0 * total / static_cast<double>(ref_counts[i].size());
    }
    return scores;
}

double cider(std::span<const std::string> candidates, std::span<const std::vector<std::string>> reference_sets) {
    const std::vector<double> s = cider_scores(candidates, reference_sets);
    double sum = 0.0;
    for (double v : s) sum += v;
    return sum / static_cast<double>(s.size());
}

// ---------------------------------------------------------------------------
// METEOR-lite

namespace {

constexpr std::size_t kSearchBudget = 200000;

/// Extends `fixed` (cand -> ref, npos when unaligned) with the most matches
/// allowed by `classes` (equal nonzero ids match), preferring fewest chunks.
class ChunkSearch {
public:
    ChunkSearch(std::vector<std::size_t> fixed, std::vector<int> cand_class, std::vector<int> ref_class)
        : fixed_(std::move(fixed)), cand_class_(std::move(cand_class)), ref_class_(std::move(ref_class)) {
        used_ref_.assign(ref_class_.size(), false);
        for (std::size_t r : fixed_) {
            if (r != npos) used_ref_[r] = true;
        }
        // Target matches per class = min(free candidates, free references).
        std::map<int, std::size_t> free_c, free_r;
        for (std::size_t i = 0; i < cand_class_.size(); ++i) {
            if (fixed_[i] == npos && cand_class_[i] != 0) ++free_c[cand_class_[i]];
        }
        for (std::size_t j = 0; j < ref_class_.size(); ++j) {
            if (!used_ref_[j] && ref_class_[j] != 0) ++free_r[ref_class_[j]];
        }
        for (const auto& [k, n] : free_c) {
            const std::size_t t = std::min(n, free_r[k]);
            if (t > 0) need_[k] = t;
        }
        remaining_ = free_c;
    }

    std::vector<std::size_t> run() {
        current_ = fixed_;
        best_ = fixed_;
        best_chunks_ = SIZE_MAX;
        dfs(0, npos, npos, 0);
        return best_;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    void dfs(std::size_t i, std::size_t prev_c, std::size_t prev_r, std::size_t chunks) {
        if (chunks >= best_chunks_) return;
        if (++nodes_ > kSearchBudget && best_chunks_ != SIZE_MAX) return;
        if (i == cand_class_.size()) {
            best_chunks_ = chunks;
            best_ = current_;
            return;
        }
        auto step = [&](std::size_t r) {
            const bool extends = prev_c != npos && prev_c + 1 == i && prev_r + 1 == r;
            return chunks + (extends ? 0 : 1);
        };
        if (fixed_[i] != npos) {
            dfs(i + 1, i, fixed_[i], step(fixed_[i]));
            return;
        }
        const int k = cand_class_[i];
        auto need_it = k != 0 ? need_.find(k) : need_.end();
        if (need_it == need_.end() || need_it->second == 0) {
            dfs(i + 1, prev_c, prev_r, chunks);
            return;
        }
        --remaining_[k];
        // Try the continuing reference first, then the rest in order.
        std::vector<std::size_t> options;
        if (prev_c != npos && prev_c + 1 == i && prev_r + 1 < ref_class_.size() &&
            ref_class_[prev_r + 1] == k && !used_ref_[prev_r + 1]) {
            options.push_back(prev_r + 1);
        }
        for (std::size_t j = 0; j < ref_class_.size(); ++j) {
            if (ref_class_[j] == k && !used_ref_[j] && (options.empty() || options[0] != j)) options.push_back(j);
        }
        for (std::size_t j : options) {
            used_ref_[j] = true;
            current_[i] = j;
            --need_it->second;
            dfs(i + 1, i, j, step(j));
            ++need_it->second;
            current_[i] = npos;
            used_ref_[j] = false;
        }
        // Skipping is allowed only if later candidates can still meet the target.
        if (remaining_[k] >= need_it->second) dfs(i + 1, prev_c, prev_r, chunks);
        ++remaining_[k];
    }

    std::vector<std::size_t> fixed_;
    std::vector<int> cand_class_;
    std::vector<int> ref_class_;
    std::vector<bool> used_ref_;
    std::map<int, std::size_t> need_;
    std::map<int, std::size_t> remaining_;
    std::vector<std::size_t> current_;
    std::vector<std::size_t> best_;
    std::size_t best_chunks_ = SIZE_MAX;
    std::size_t nodes_ = 0;
};

std::vector<std::size_t> align_stage(const std::vector<std::size_t>& fixed,
                                     std::span<const std::string> cand_keys,
                                     std::span<const std::string> ref_keys, const std::vector<bool>& ref_fixed) {
    std::map<std::string, int> ids;
    auto id_of = [&](const std::string& key) {
        auto [it, inserted] = ids.emplace(key, static_cast<int>(ids.size()) + 1);
        return it->second;
    };
    std::vector<int> cc(cand_keys.size(), 0), rc(ref_keys.size(), 0);
    for (std::size_t i = 0; i < cand_keys.size(); ++i) {
        if (fixed[i] == ChunkSearch::npos) cc[i] = id_of(cand_keys[i]);
    }
    for (std::size_t j = 0; j < ref_keys.size(); ++j) {
        if (!ref_fixed[j]) rc[j] = id_of(ref_keys[j]);
    }
    return ChunkSearch(fixed, std::move(cc), std::move(rc)).run();
}

}  // namespace

MeteorAlignment meteor_align(std::span<const std::string> candidate, std::span<const std::string> reference) {
    const std::size_t npos = ChunkSearch::npos;
    std::vector<std::size_t> mapping(candidate.size(), npos);
    std::vector<bool> ref_used(reference.size(), false);

    mapping = align_stage(mapping, candidate, reference, ref_used);
    for (std::size_t r : mapping) {
        if (r != npos) ref_used[r] = true;
    }
    std::vector<std::string> cand_stems, ref_stems;
    for (const auto& w : candidate) cand_stems.push_back(stem(w));
    for (const auto& w : reference) ref_stems.push_back(stem(w));
    mapping = align_stage(mapping, cand_stems, ref_stems, ref_used);

    MeteorAlignment out;
    std::size_t prev_c = npos, prev_r = npos;
    for (std::size_t i = 0; i < mapping.size(); ++i) {
        if (mapping[i] == npos) continue;
        out.pairs.emplace_back(i, mapping[i]);
        ++out.matches;
        if (!(prev_c != npos && prev_c + 1 == i && prev_r + 1 == mapping[i])) ++out.chunks;
        prev_c = i;
        prev_r = mapping[i];
    }
    return out;
}

double meteor_lite(std::string_view candidate, std::string_view reference) {
    const auto c = caption_tokens(candidate);
    const auto r = caption_tokens(reference);
    if (c.empty() || r.empty()) return 0.0;
    const MeteorAlignment a = meteor_align(c, r);
    if (a.matches == 0) return 0.0;
    const double m = static_cast<double>(a.matches);
    const double p = m / static_cast<double>(c.size());
    const double rec = m / static_cast<double>(r.size());
    const double f_mean = 10.0 * p * rec / (rec + 9.0 * p);
    const double frag = static_cast<double>(a.chunks) / m;
    const double penalty = 0.5 * frag * frag * frag;
    return f_mean * (1.0 - penalty);
}

// ---------------------------------------------------------------------------
// Matched-pair captioning metrics

CaptionPairScores matched_pair_caption_metrics(std::span<const DenseVideo> videos,
                                               std::span<const double> thresholds) {
    CaptionPairScores out;
    std::size_t total_predictions = 0;
    for (const DenseVideo& v : videos) total_predictions += v.predictions.size();
    if (total_predictions == 0 || thresholds.empty()) {
        out.empty = true;
        return out;
    }
    for (double t : thresholds) {
        std::vector<std::string> candidates;
        std::vector<std::vector<std::string>> references;
        for (const DenseVideo& v : videos) {
            for (const SpanCaption& p : v.predictions) {
                const SpanCaption* best = nullptr;
                double best_iou = -1.0;
                for (const auto& set : v.ground_truth_sets) {
                    for (const SpanCaption& g : set) {
                        const double s = iou(p.span, g.span);
                        if (s > best_iou) {
                            best_iou = s;
                            best = &g;
                        }
                    }
                }
                if (best != nullptr && reaches(best_iou, t)) {
                    candidates.push_back(p.caption);
                    references.push_back({best->caption});
                }
            }
        }
        double cider_sum = 0.0;
        double meteor_sum = 0.0;
        if (!candidates.empty()) {
            for (double s : cider_scores(candidates, references)) cider_sum += s;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                meteor_sum += meteor_lite(candidates[i], references[i][0]);
            }
        }
        out.cider += cider_sum / static_cast<double>(total_predictions);
        out.meteor += meteor_sum / static_cast<double>(total_predictions);
    }
    out.cider /= static_cast<double>(thresholds.size());
    out.meteor /= static_cast<double>(thresholds.size());
    return out;
}

CaptionPairScores matched_pair_caption_metrics(std::span<const SpanCaption> predictions,
                                               std::span<const SpanCaption> ground_truth,
                                               std::span<const double> thresholds) {
    DenseVideo v;
    v.predictions.assign(predictions.begin(), predictions.end());
    v.ground_truth_sets.emplace_back(ground_truth.begin(), ground_truth.end());
    return matched_pair_caption_metrics(std::span<const DenseVideo>(&v, 1), thresholds);
}

// ---------------------------------------------------------------------------
// SODA

Alignment soda_alignment_dp(std::span<const double> scores, std::size_t rows, std::size_t cols) {
    if (scores.size() != rows * cols) throw Error(ErrorCode::invalid_argument, "score matrix shape mismatch");
    Alignment out;
    if (rows == 0 || cols == 0) return out;
    for (double v : scores) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::invalid_argument, "score matrix entries must be finite and >= 0");
        }
    }
    // best[(i)*(cols+1)+j] = optimum over the first i rows and j columns.
    std::vector<double> best((rows + 1) * (cols + 1), 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return best[i * (cols + 1) + j]; };
    for (std::size_t i = 1; i <= rows; ++i) {
        for (std::size_t j = 1; j <= cols; ++j) {
            at(i, j) = std::max({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1) + scores[(i - 1) * cols + (j - 1)]});
        }
    }
    out.total = at(rows, cols);
    std::size_t i = rows, j = cols;
    while (i > 0 && j > 0) {
        if (at(i, j) == at(i - 1, j)) {
            --i;
        } else if (at(i, j) == at(i, j - 1)) {
            --j;
        } else {
            out.pairs.emplace_back(i - 1, j - 1);
            --i;
            --j;
        }
    }
    std::reverse(out.pairs.begin(), out.pairs.end());
    return out;
}

Alignment soda_alignment_dp(const std::vector<std::vector<double>>& scores) {
    const std::size_t rows = scores.size();
    const std::size_t cols = rows == 0 ? 0 : scores[0].size();
    std::vector<double> flat;
    flat.reserve(rows * cols);
    for (const auto& row : scores) {
        if (row.size() != cols) throw Error(ErrorCode::invalid_argument, "ragged score matrix");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return soda_alignment_dp(flat, rows, cols);
}

SodaResult soda_c(std::span<const SpanCaption> predictions, std::span<const std::vector<SpanCaption>> ground_truth_sets) {
    SodaResult out;
    if (predictions.empty()) {
        out.empty = true;
        return out;
    }
    if (ground_truth_sets.empty()) throw Error(ErrorCode::invalid_argument, "SODA_c needs a reference set");
    auto by_time = [](const SpanCaption& a, const SpanCaption& b) { return a.span < b.span; };
    std::vector<SpanCaption> preds(predictions.begin(), predictions.end());
    std::stable_sort(preds.begin(), preds.end(), by_time);

    double f_sum = 0.0;
    for (const auto& set : ground_truth_sets) {
        if (set.empty()) continue;
        std::vector<SpanCaption> gts(set.begin(), set.end());
        std::stable_sort(gts.begin(), gts.end(), by_time);
        std::vector<double> m(gts.size() * preds.size(), 0.0);
        for (std::size_t g = 0; g < gts.size(); ++g) {
            for (std::size_t r = 0; r < preds.size(); ++r) {
                const double overlap = iou(gts[g].span, preds[r].span);
                if (overlap > 0.0) m[g * preds.size() + r] = overlap * meteor_lite(preds[r].caption, gts[g].caption);
            }
        }
        const double total = soda_alignment_dp(m, gts.size(), preds.size()).total;
        const double precision = total / static_cast<double>(preds.size());
        const double recall = total / static_cast<double>(gts.size());
        if (precision + recall > 0.0) f_sum += 2.0 * precision * recall / (precision + recall);
    }
    out.score = f_sum / static_cast<double>(ground_truth_sets.size());
    return out;
}

nlohmann::json DenseCaptionResult::to_json() const {
    return nlohmann::json{{"SODA_c", soda_c},           {"CIDEr", cider},
                          {"METEOR", meteor},           {"thresholds", thresholds},
                          {"video_count", video_count}, {"excluded_count", excluded_count},
                          {"empty", video_count == 0}};
}

DenseCaptionResult dense_caption_metrics(std::span<const DenseVideo> videos, std::span<const double> thresholds) {
    DenseCaptionResult out;
    out.thresholds.assign(thresholds.begin(), thresholds.end());
    std::vector<DenseVideo> included;
    for (const DenseVideo& v : videos) {
        if (v.predictions.empty()) {
            ++out.excluded_count;
        } else {
            included.push_back(v);
        }
    }
    out.video_count = included.size();
    if (included.empty()) return out;
    double soda_sum = 0.0;
    for (const DenseVideo& v : included) soda_sum += soda_c(v.predictions, v.ground_truth_sets).score;
    out.soda_c = soda_sum / static_cast<double>(included.size());
    const CaptionPairScores cp = matched_pair_caption_metrics(included, thresholds);
    out.cider = cp.cider;
    out.meteor = cp.meteor;
    return out;
}

}  // namespace momentkit::metrics
