// aigc: train/evaluate/apply the detection pipeline from the command line.
//
// Exit codes: 0 success, 1 configuration or input-validation error, 2 runtime
// error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "aigc/attacks.hpp"
#include "aigc/checkpoint.hpp"
#include "aigc/corpus.hpp"
#include "aigc/encoding.hpp"
#include "aigc/errors.hpp"
#include "aigc/head.hpp"
#include "aigc/linguistic.hpp"
#include "aigc/metrics.hpp"
#include "aigc/promptgen.hpp"
#include "aigc/training.hpp"
#include "aigc/transfer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aigc;

namespace {

struct RunConfig {
    std::string corpus_path;
    std::string checkpoint_path;
    std::string cache_dir;
    std::string lexicon_dir;
    std::string model_dir;
    std::string encoder = "hash:64";
    bool encoder_explicit = false;
    head::HeadConfig head;
    training::TrainConfig train;
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

void apply_json(RunConfig& cfg, const json& j) {
    if (j.contains("corpus")) cfg.corpus_path = j["corpus"].get<std::string>();
    if (j.contains("checkpoint")) cfg.checkpoint_path = j["checkpoint"].get<std::string>();
    if (j.contains("cache_dir")) cfg.cache_dir = j["cache_dir"].get<std::string>();
    if (j.contains("lexicon_dir")) cfg.lexicon_dir = j["lexicon_dir"].get<std::string>();
    if (j.contains("model_dir")) cfg.model_dir = j["model_dir"].get<std::string>();
    if (j.contains("encoder")) {
        cfg.encoder = j["encoder"].get<std::string>();
        cfg.encoder_explicit = true;
    }
    if (j.contains("seed")) {
        cfg.seed = j["seed"].get<std::uint64_t>();
        cfg.train.seed = cfg.seed;
    }
    if (j.contains("train_fraction")) cfg.train_fraction = j["train_fraction"].get<double>();
    if (j.contains("head")) {
        const json& h = j["head"];
        if (h.contains("hidden")) cfg.head.hidden = h["hidden"].get<std::size_t>();
        if (h.contains("num_classes")) cfg.head.num_classes = h["num_classes"].get<std::size_t>();
        if (h.contains("dropout_p")) cfg.head.dropout_p = h["dropout_p"].get<double>();
        if (h.contains("bidirectional")) cfg.head.bidirectional = h["bidirectional"].get<bool>();
        if (h.contains("use_attention")) cfg.head.use_attention = h["use_attention"].get<bool>();
        if (h.contains("variant"))
            cfg.head.variant = head::variant_from_string(h["variant"].get<std::string>());
    }
    if (j.contains("train")) {
        const json& t = j["train"];
        if (t.contains("lr0")) cfg.train.lr0 = t["lr0"].get<double>();
        if (t.contains("batch_size")) cfg.train.batch_size = t["batch_size"].get<std::size_t>();
        if (t.contains("max_epochs")) cfg.train.max_epochs = t["max_epochs"].get<std::size_t>();
        if (t.contains("patience")) cfg.train.patience = t["patience"].get<std::size_t>();
        if (t.contains("min_delta")) cfg.train.min_delta = t["min_delta"].get<double>();
        if (t.contains("weight_decay")) cfg.train.weight_decay = t["weight_decay"].get<double>();
        if (t.contains("schedule")) {
            std::string s = t["schedule"].get<std::string>();
            if (s == "cosine")
                cfg.train.schedule = training::TrainConfig::Schedule::cosine;
            else if (s == "constant")
                cfg.train.schedule = training::TrainConfig::Schedule::constant;
            else
                throw ConfigError("unknown schedule: " + s);
        }
    }
}

// "--set a.b=c" overrides: rebuilt into a nested json object and re-applied.
json overrides_to_json(const std::vector<std::string>& sets) {
    json root = json::object();
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + kv);
        std::string key = kv.substr(0, eq);
        std::string value = kv.substr(eq + 1);
        json* node = &root;
        std::size_t start = 0;
        for (;;) {
            auto dot = key.find('.', start);
            std::string part = key.substr(start, dot - start);
            if (part.empty()) throw ConfigError("--set has an empty key segment: " + kv);
            if (dot == std::string::npos) {
                json parsed = json::parse(value, nullptr, false);
                (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
                break;
            }
            node = &(*node)[part];
            start = dot + 1;
        }
    }
    return root;
}

RunConfig load_run_config(const std::string& config_path, const std::vector<std::string>& sets) {
    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ParseError(std::string("config file is not valid JSON: ") + e.what());
        }
        apply_json(cfg, j);
    }
    if (!sets.empty()) apply_json(cfg, overrides_to_json(sets));
    return cfg;
}

corpus::LabeledCorpus load_corpus_checked(const std::string& path) {
    if (path.empty()) throw ConfigError("no corpus path given");
    if (!fs::exists(path)) throw ConfigError("corpus file does not exist: " + path);
    return corpus::load_corpus(path);
}

std::shared_ptr<encoding::Encoder> make_encoder(const RunConfig& cfg) {
    return encoding::create_encoder(cfg.encoder, cfg.model_dir);
}

std::string class_name(std::size_t idx, std::size_t num_classes) {
    if (num_classes == 2) return idx == 0 ? "HUM" : "GPT";
    static const char* names[] = {"HUM", "GPT-WRI", "GPT-CPL", "GPT-POL"};
    return idx < 4 ? names[idx] : std::to_string(idx);
}

int cmd_train(RunConfig cfg) {
    auto all = load_corpus_checked(cfg.corpus_path);
    if (cfg.checkpoint_path.empty()) throw ConfigError("no checkpoint output path given");
    auto [train_corpus, val_corpus] = corpus::split(all, {cfg.train_fraction, cfg.seed});
    auto encoder = make_encoder(cfg);
    auto train_set =
        training::encode_corpus(train_corpus, *encoder, cfg.head.num_classes, cfg.cache_dir);
    auto val_set =
        training::encode_corpus(val_corpus, *encoder, cfg.head.num_classes, cfg.cache_dir);
    cfg.head.d_in = encoder->descriptor().d;
    auto params = head::init_head<float>(cfg.head, cfg.seed);
    auto result = training::train(params, train_set, val_set, cfg.train);
    for (std::size_t e = 0; e < result.history.epochs.size(); ++e) {
        const auto& rec = result.history.epochs[e];
        json line = {{"epoch", e},
                     {"train_loss", rec.train_loss},
                     {"val_loss", rec.val_loss},
                     {"val_accuracy", rec.val_accuracy},
                     {"lr", rec.lr}};
        std::cout << line.dump() << "\n";
    }
    training::Checkpoint ck;
    ck.params = std::move(result.params);
    ck.encoder_name = encoder->descriptor().name;
    ck.epoch = static_cast<std::uint32_t>(result.history.epochs.size());
    if (!result.history.epochs.empty()) {
        ck.metrics["val_loss"] = result.history.epochs.back().val_loss;
        ck.metrics["val_accuracy"] = result.history.epochs.back().val_accuracy;
    }
    training::save_checkpoint(ck, cfg.checkpoint_path);
    std::cout << "checkpoint written to " << cfg.checkpoint_path << "\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& report_path) {
    if (cfg.checkpoint_path.empty()) throw ConfigError("no checkpoint path given");
    auto ck = training::load_checkpoint(cfg.checkpoint_path);
    if (cfg.encoder_explicit && cfg.encoder != ck.encoder_name) {
        throw ConfigError("encoder mismatch: config says '" + cfg.encoder +
                          "' but checkpoint was trained with '" + ck.encoder_name + "'");
    }
    auto test = load_corpus_checked(cfg.corpus_path);
    if (test.empty()) throw ValidationError("test corpus is empty: " + cfg.corpus_path);
    auto encoder = encoding::create_encoder(ck.encoder_name, cfg.model_dir);
    std::size_t num_classes = ck.params.config.num_classes;
    auto data = training::encode_corpus(test, *encoder, num_classes, cfg.cache_dir);

    std::string out_path =
        report_path.empty() ? cfg.checkpoint_path + ".eval.json" : report_path;
    if (num_classes == 2) {
        auto rep = metrics::evaluate_binary(ck.params, data);
        std::cout << metrics::to_table(rep);
        std::ofstream out(out_path, std::ios::trunc);
        out << metrics::to_json(rep) << "\n";
    } else {
        std::vector<std::size_t> pred, actual;
        for (const auto& s : data) {
            pred.push_back(head::forward(s.embedding, ck.params, head::Mode::eval).label);
            actual.push_back(s.label);
        }
        auto counts = metrics::confusion_multiclass(pred, actual, num_classes);
        auto rep = metrics::report_multiclass(counts);
        json out_json = {{"accuracy", rep.accuracy}, {"n", rep.n}};
        for (std::size_t c = 0; c < rep.per_class_tpr.size(); ++c) {
            std::printf("TPR[%s]  %.4f\n", class_name(c, num_classes).c_str(),
                        rep.per_class_tpr[c]);
            out_json["tpr"][class_name(c, num_classes)] = rep.per_class_tpr[c];
        }
        std::printf("ACC      %.4f\nN        %zu\n", rep.accuracy, rep.n);
        std::ofstream out(out_path, std::ios::trunc);
        out << out_json.dump() << "\n";
    }
    std::cout << "report written to " << out_path << "\n";
    return 0;
}

int cmd_predict(const RunConfig& cfg, const std::string& text, const std::string& input_path) {
    if (cfg.checkpoint_path.empty()) throw ConfigError("no checkpoint path given");
    auto ck = training::load_checkpoint(cfg.checkpoint_path);
    auto encoder = encoding::create_encoder(ck.encoder_name, cfg.model_dir);
    std::size_t num_classes = ck.params.config.num_classes;

    std::vector<std::pair<std::string, std::string>> inputs;  // id, text
    if (!text.empty()) {
        inputs.emplace_back("text-0", text);
    } else if (!input_path.empty()) {
        auto corp = load_corpus_checked(input_path);
        for (const auto& s : corp.samples) inputs.emplace_back(s.id, s.text);
    } else {
        throw ConfigError("predict needs --text or --input");
    }
    for (const auto& [id, body] : inputs) {
        auto emb = encoder->encode_text(body);
        auto pred = head::forward(emb, ck.params, head::Mode::eval);
        std::cout << id << "\t" << class_name(pred.label, num_classes);
        for (float p : pred.probs) std::printf("\t%.6f", p);
        std::cout << "\n";
    }
    return 0;
}

int cmd_transfer(const RunConfig& cfg, const std::string& mode, std::size_t cap,
                 const std::string& out_path) {
    if (cfg.checkpoint_path.empty()) throw ConfigError("no checkpoint path given");
    if (mode != "ftl" && mode != "fta") throw ConfigError("transfer mode must be ftl or fta");
    auto ck = training::load_checkpoint(cfg.checkpoint_path);
    auto target = load_corpus_checked(cfg.corpus_path);
    auto encoder = encoding::create_encoder(ck.encoder_name, cfg.model_dir);
    std::size_t num_classes = ck.params.config.num_classes;

    auto [tune_corpus, test_corpus] = corpus::split(target, {cfg.train_fraction, cfg.seed});
    if (cap < tune_corpus.size()) {
        tune_corpus.samples.resize(cap);
    } else if (cap > tune_corpus.size()) {
        std::cerr << "warning: sample cap " << cap << " exceeds available " << tune_corpus.size()
                  << " tuning samples; using the whole tuning split\n";
    }
    auto tune = training::encode_corpus(tune_corpus, *encoder, num_classes, cfg.cache_dir);
    auto test = training::encode_corpus(test_corpus, *encoder, num_classes, cfg.cache_dir);

    auto before = metrics::evaluate_binary(ck.params, test);
    auto result = (mode == "ftl") ? training::finetune_last_layer(ck.params, tune, tune, cfg.train)
                                  : training::finetune_all(ck.params, tune, tune, cfg.train);
    auto after = metrics::evaluate_binary(result.params, test);
    std::printf("F1 before  %.4f\nF1 after   %.4f\n", before.f1, after.f1);

    training::Checkpoint tuned = ck;
    tuned.params = std::move(result.params);
    tuned.metrics["f1_before"] = before.f1;
    tuned.metrics["f1_after"] = after.f1;
    std::string path = out_path.empty() ? cfg.checkpoint_path + ".tuned" : out_path;
    training::save_checkpoint(tuned, path);
    std::cout << "tuned checkpoint written to " << path << "\n";
    return 0;
}

int cmd_attack(const RunConfig& cfg, const std::string& gpt_path, const std::string& human_path,
               const std::string& attack, const std::string& dump_path) {
    if (cfg.checkpoint_path.empty()) throw ConfigError("no checkpoint path given");
    auto ck = training::load_checkpoint(cfg.checkpoint_path);
    auto encoder = encoding::create_encoder(ck.encoder_name, cfg.model_dir);
    std::size_t num_classes = ck.params.config.num_classes;
    auto gpt = load_corpus_checked(gpt_path);

    corpus::LabeledCorpus attacked = gpt;
    std::string kind;
    if (attack.rfind("mixing:", 0) == 0) {
        kind = "mixing(" + attack.substr(7) + ")";
        auto spec = attacks::mixing_spec_from_string(attack.substr(7));
        auto human = load_corpus_checked(human_path);
        std::map<std::string, const corpus::TextSample*> by_id;
        for (const auto& s : human.samples) by_id[s.id] = &s;
        for (auto& s : attacked.samples) {
            auto it = by_id.find(s.id);
            if (it == by_id.end())
                throw ValidationError("mixing attack: no paired human sample for id " + s.id);
            s.text = attacks::mixing_attack(s.text, it->second->text, spec);
        }
    } else if (attack.rfind("copyedit:", 0) == 0) {
        std::string ruleset = attack.substr(9);
        kind = "copyedit(" + ruleset + ")";
        auto rules = attacks::compile_rules(attacks::load_rule_file(ruleset));
        for (auto& s : attacked.samples) s.text = attacks::copyedit(s.text, rules);
    } else {
        throw ConfigError("attack must be mixing:<positions> or copyedit:<ruleset path>");
    }

    auto score_tpr = [&](const corpus::LabeledCorpus& c) {
        std::size_t flagged = 0;
        for (const auto& s : c.samples) {
            auto pred = head::forward(encoder->encode_text(s.text), ck.params, head::Mode::eval);
            if (training::is_positive_class(pred.label, num_classes)) ++flagged;
        }
        return c.empty() ? 0.0 : static_cast<double>(flagged) / c.size();
    };
    double tpr_before = score_tpr(gpt);
    double tpr_after = score_tpr(attacked);
    std::printf("attack      %s\nTPR before  %.4f\nTPR under   %.4f\n", kind.c_str(), tpr_before,
                tpr_after);
    if (!dump_path.empty()) {
        corpus::save_corpus(attacked, dump_path);
        std::cout << "attacked corpus written to " << dump_path << "\n";
    }
    return 0;
}

int cmd_features(const RunConfig& cfg, const std::string& out_path, bool train_gb) {
    auto corp = load_corpus_checked(cfg.corpus_path);
    if (corp.empty()) throw ValidationError("corpus is empty: " + cfg.corpus_path);
    auto tagger = linguistic::fallback_tagger();
    auto lexicons = cfg.lexicon_dir.empty() ? linguistic::LexiconSet::empty()
                                            : linguistic::LexiconSet::load(cfg.lexicon_dir);

    std::vector<std::vector<double>> matrix;
    std::vector<int> labels;
    for (const auto& s : corp.samples) {
        matrix.push_back(linguistic::extract_features(s.text, *tagger, lexicons).values);
        labels.push_back(s.label == corpus::Label::HUM ? 0 : 1);
    }

    std::string path = out_path.empty() ? cfg.corpus_path + ".features.tsv" : out_path;
    {
        std::ofstream out(path, std::ios::trunc);
        out << "id\tlabel";
        for (const auto& name : linguistic::feature_names()) out << "\t" << name;
        out << "\n";
        for (std::size_t i = 0; i < matrix.size(); ++i) {
            out << corp.samples[i].id << "\t" << labels[i];
            for (double v : matrix[i]) out << "\t" << v;
            out << "\n";
        }
    }
    std::cout << "feature matrix (" << matrix.size() << " rows) written to " << path << "\n";

    if (train_gb) {
        linguistic::GBConfig gb_cfg;
        gb_cfg.seed = cfg.seed;
        auto model = linguistic::gb_train(matrix, labels, gb_cfg);
        std::vector<int> pred, actual;
        for (std::size_t i = 0; i < matrix.size(); ++i) {
            pred.push_back(linguistic::gb_predict(model, matrix[i]).second);
            actual.push_back(labels[i]);
        }
        auto cm = metrics::confusion(pred, actual, 1);
        auto rep = metrics::report(cm);
        std::printf("GB F1   %.4f\nGB ACC  %.4f\n", rep.f1, rep.accuracy);
        std::cout << "importance (descending):\n";
        for (const auto& [feature, gain] : linguistic::gb_importance(model)) {
            std::printf("  %-20s %.6f\n", linguistic::feature_names()[feature].c_str(), gain);
        }
    }
    return 0;
}

int cmd_generate(const RunConfig& cfg, const std::string& task_name, int prompt_id,
                 const std::string& discipline, const std::string& out_path,
                 const std::string& model, bool live, const std::string& base_url) {
    auto inputs = load_corpus_checked(cfg.corpus_path);
    corpus::Task task = corpus::task_from_string(task_name);
    const auto& tmpl = promptgen::get_template(task, prompt_id);

    std::unique_ptr<promptgen::Transport> live_transport;
    promptgen::MockEchoTransport mock;
    promptgen::Transport* transport = &mock;
    if (live) {
        live_transport = promptgen::make_live_transport(base_url);
        transport = live_transport.get();
    }
    promptgen::RateLimiter limiter(live ? 30 : 0);
    std::string cache = cfg.cache_dir.empty() ? "prompt_cache" : cfg.cache_dir;

    corpus::LabeledCorpus out;
    out.metadata["generator"] = transport->name();
    for (const auto& s : inputs.samples) {
        std::string input = s.text;
        std::optional<std::size_t> x;
        if (task == corpus::Task::CPL) {
            auto [half, rest_words] = corpus::make_completion_input(s.text);
            input = half;
            x = rest_words;
        }
        promptgen::ChatRequest req;
        req.model = model;
        req.prompt = promptgen::build_prompt(tmpl, input, discipline, x);
        auto resp = promptgen::send(req, *transport, cache, &limiter);

        corpus::TextSample gen;
        gen.id = s.id + "-gen";
        gen.text = resp.text;
        gen.task = task;
        gen.label = task == corpus::Task::WRI   ? corpus::Label::GPT_WRI
                    : task == corpus::Task::CPL ? corpus::Label::GPT_CPL
                                                : corpus::Label::GPT_POL;
        gen.discipline = discipline;
        gen.prompt_id = prompt_id;
        out.samples.push_back(std::move(gen));
    }
    if (out_path.empty()) throw ConfigError("generate needs --out");
    corpus::save_corpus(out, out_path);
    std::cout << out.size() << " generated samples written to " << out_path << "\n";
    return 0;
}

int cmd_score_batch(const RunConfig& cfg, const std::string& input_path) {
    if (cfg.checkpoint_path.empty()) throw ConfigError("no checkpoint path given");
    auto ck = training::load_checkpoint(cfg.checkpoint_path);
    auto encoder = encoding::create_encoder(ck.encoder_name, cfg.model_dir);
    std::size_t num_classes = ck.params.config.num_classes;
    auto docs = load_corpus_checked(input_path);

    std::map<std::string, std::pair<std::size_t, std::size_t>> by_month;  // month -> (n, flagged)
    for (const auto& s : docs.samples) {
        auto it = s.extra.find("date");
        if (it == s.extra.end())
            throw ValidationError("document " + s.id + " has no date field");
        const std::string& date = it->second;
        // ISO-8601: YYYY-MM-DD...; the calendar month is the first 7 chars.
        if (date.size() < 7 || date[4] != '-' || !std::isdigit((unsigned char)date[0]) ||
            !std::isdigit((unsigned char)date[5]) || !std::isdigit((unsigned char)date[6]))
            throw ValidationError("document " + s.id + " has a malformed date: " + date);
        std::string month = date.substr(0, 7);
        auto pred = head::forward(encoder->encode_text(s.text), ck.params, head::Mode::eval);
        auto& bucket = by_month[month];
        bucket.first += 1;
        if (training::is_positive_class(pred.label, num_classes)) bucket.second += 1;
    }
    std::printf("%-8s %6s %14s\n", "month", "n", "positive_rate");
    for (const auto& [month, counts] : by_month) {
        double rate = counts.first == 0 ? 0.0 : double(counts.second) / double(counts.first);
        std::printf("%-8s %6zu %13.1f%%\n", month.c_str(), counts.first, rate * 100.0);
        json line = {{"month", month}, {"n", counts.first}, {"positive_rate", rate}};
        std::cerr << line.dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Machine-generated-text detection pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "JSON run configuration file");
    app.add_option("--set", sets, "Override a config key: --set train.lr0=1e-3");

    // Per-subcommand options mirror config keys; flags win over the file.
    struct {
        std::string corpus, checkpoint, encoder, cache_dir, model_dir, lexicon_dir;
        std::string text, input, report, mode = "ftl", out, attack, human, gpt, dump;
        std::string task = "WRI", discipline = "computer science", model = "gpt-3.5-turbo";
        std::string base_url = "https://api.openai.com";
        int prompt_id = 1;
        std::size_t cap = 150;
        std::optional<std::uint64_t> seed;
        bool train_gb = false, live = false;
    } opt;

    auto add_common = [&](CLI::App* sub, bool with_checkpoint = true) {
        sub->add_option("--config", config_path, "JSON run configuration file");
        sub->add_option("--set", sets, "Override a config key: --set train.lr0=1e-3");
        sub->add_option("--corpus", opt.corpus, "JSONL corpus path");
        if (with_checkpoint) sub->add_option("--checkpoint", opt.checkpoint, "Checkpoint path");
        sub->add_option("--encoder", opt.encoder, "Encoder name");
        sub->add_option("--cache-dir", opt.cache_dir, "Embedding/prompt cache directory");
        sub->add_option("--model-dir", opt.model_dir, "Pretrained model directory");
        sub->add_option("--seed", opt.seed, "Random seed");
    };

    auto* train = app.add_subcommand("train", "Train a detection head");
    add_common(train);
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a corpus");
    add_common(eval);
    eval->add_option("--report", opt.report, "Machine-readable report path");
    auto* predict = app.add_subcommand("predict", "Score texts with a checkpoint");
    add_common(predict);
    predict->add_option("--text", opt.text, "Single text to score");
    predict->add_option("--input", opt.input, "JSONL file of texts to score");
    auto* transfer = app.add_subcommand("transfer", "Fine-tune on a target domain");
    add_common(transfer);
    transfer->add_option("--mode", opt.mode, "ftl (last layer) or fta (all layers)");
    transfer->add_option("--cap", opt.cap, "Tuning sample cap");
    transfer->add_option("--out", opt.out, "Tuned checkpoint path");
    auto* attack = app.add_subcommand("attack", "Evaluate sanitization attacks");
    add_common(attack);
    attack->add_option("--gpt", opt.gpt, "GPT-labeled corpus")->required();
    attack->add_option("--human", opt.human, "Paired human corpus (mixing)");
    attack->add_option("--attack", opt.attack, "mixing:<positions> or copyedit:<ruleset>")
        ->required();
    attack->add_option("--dump", opt.dump, "Write attacked texts to this path");
    auto* features = app.add_subcommand("features", "Extract linguistic features");
    add_common(features, false);
    features->add_option("--lexicon-dir", opt.lexicon_dir, "Lexicon word-list directory");
    features->add_option("--out", opt.out, "Feature matrix output path");
    features->add_flag("--train-gb", opt.train_gb, "Also fit the GBDT baseline");
    auto* generate = app.add_subcommand("generate", "Build prompts and collect generations");
    add_common(generate, false);
    generate->add_option("--task", opt.task, "WRI, CPL, or POL");
    generate->add_option("--prompt-id", opt.prompt_id, "Template id 1-4");
    generate->add_option("--discipline", opt.discipline, "Discipline for templated prompts");
    generate->add_option("--model", opt.model, "Model name for requests");
    generate->add_option("--out", opt.out, "Output corpus path");
    generate->add_flag("--live", opt.live, "Use the live API (needs AIGC_API_KEY)");
    generate->add_option("--base-url", opt.base_url, "Live API base URL");
    auto* score_batch = app.add_subcommand("score-batch", "Monthly positive-rate report");
    add_common(score_batch);
    score_batch->add_option("--input", opt.input, "JSONL of dated documents")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_run_config(config_path, sets);
        if (!opt.corpus.empty()) cfg.corpus_path = opt.corpus;
        if (!opt.checkpoint.empty()) cfg.checkpoint_path = opt.checkpoint;
        if (!opt.encoder.empty()) {
            cfg.encoder = opt.encoder;
            cfg.encoder_explicit = true;
        }
        if (!opt.cache_dir.empty()) cfg.cache_dir = opt.cache_dir;
        if (!opt.model_dir.empty()) cfg.model_dir = opt.model_dir;
        if (!opt.lexicon_dir.empty()) cfg.lexicon_dir = opt.lexicon_dir;
        if (opt.seed) {
            cfg.seed = *opt.seed;
            cfg.train.seed = *opt.seed;
        }
        cfg.head.validate();
        cfg.train.validate();

        if (train->parsed()) return cmd_train(cfg);
        if (eval->parsed()) return cmd_eval(cfg, opt.report);
        if (predict->parsed()) return cmd_predict(cfg, opt.text, opt.input);
        if (transfer->parsed()) return cmd_transfer(cfg, opt.mode, opt.cap, opt.out);
        if (attack->parsed()) return cmd_attack(cfg, opt.gpt, opt.human, opt.attack, opt.dump);
        if (features->parsed()) return cmd_features(cfg, opt.out, opt.train_gb);
        if (generate->parsed())
            return cmd_generate(cfg, opt.task, opt.prompt_id, opt.discipline, opt.out, opt.model,
                                opt.live, opt.base_url);
        if (score_batch->parsed()) return cmd_score_batch(cfg, opt.input);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
