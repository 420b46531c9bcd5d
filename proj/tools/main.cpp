#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "banknet/augment.hpp"
#include "banknet/checkpoint.hpp"
#include "banknet/dataset.hpp"
#include "banknet/metrics.hpp"
#include "banknet/model.hpp"
#include "banknet/train.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kBadInput = 2;
constexpr int kDiverged = 3;

using Net = banknet::Network<float>;

struct GenArgs {
    std::string out;
    int per_class = 1000;
    int classes = 5;
    std::uint64_t seed = 0;
};

int cmd_gen(const GenArgs& a) {
    banknet::Dataset ds = banknet::generate_synthetic(a.classes, a.per_class, a.seed);
    banknet::write_dataset(ds, a.out);
    std::vector<int> counts(static_cast<std::size_t>(ds.class_count), 0);
    for (const auto& item : ds.items) ++counts[static_cast<std::size_t>(item.label)];
    for (int c = 0; c < ds.class_count; ++c) {
        std::cout << "class " << c << " (denomination "
                  << banknet::kDenominations[static_cast<std::size_t>(c)] << "): " << counts[c]
                  << " items\n";
    }
    std::cout << "total " << ds.items.size() << " items in " << a.out << "\n";
    return kOk;
}

struct TrainArgs {
    std::string data;
    std::string out;
    std::uint64_t seed = 0;
    int epochs = 400;
    int batch = 100;
    double lr = 0.1;
    double threshold = 0.1;
    int image_size = 150;
    double width_scale = 1.0;
};

int cmd_train(const TrainArgs& a) {
    banknet::Dataset raw = banknet::load_dataset(a.data);
    banknet::Dataset ds = banknet::resized(raw, a.image_size, a.image_size);
    banknet::SplitSpec spec;
    spec.seed = a.seed;
    banknet::SplitResult splits = banknet::split(ds, spec);

    banknet::NetworkConfig cfg = banknet::build_alexnet_variant(a.image_size, a.image_size, 3,
                                                                ds.class_count, a.width_scale);
    Net net(cfg);
    net.init_params(a.seed);

    banknet::TrainConfig tc;
    tc.learning_rate = a.lr;
    tc.batch_size = a.batch;
    tc.epochs = a.epochs;
    tc.seed = a.seed;
    tc.augment_threshold = a.threshold;

    std::cout << "epoch\ttrain_loss\ttrain_acc\tval_loss\tval_acc" << std::endl;
    banknet::fit<float>(net, splits.train, splits.val, tc, [](const banknet::EpochStats& s) {
        std::printf("%zu\t%.6f\t%.6f\t%.6f\t%.6f\n", s.epoch, s.train_loss, s.train_acc, s.val_loss,
                    s.val_acc);
        std::fflush(stdout);
    });
    banknet::save_checkpoint(net, a.out, a.seed);
    std::cerr << "saved checkpoint to " << a.out << "\n";
    return kOk;
}

banknet::ConfusionMatrix parse_matrix_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw banknet::IoError("cannot read matrix file: " + path);
    std::vector<std::vector<std::int64_t>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<std::int64_t> vals;
        std::string cell;
        while (std::getline(row, cell, '\t')) vals.push_back(std::stoll(cell));
        rows.push_back(std::move(vals));
    }
    const auto k = rows.size();
    if (k == 0) throw banknet::IoError("matrix file is empty: " + path);
    banknet::ConfusionMatrix cm(static_cast<int>(k));
    for (std::size_t i = 0; i < k; ++i) {
        if (rows[i].size() != k) {
            throw banknet::IoError("matrix file: row " + std::to_string(i) + " has " +
                                   std::to_string(rows[i].size()) + " columns, expected " +
                                   std::to_string(k));
        }
        for (std::size_t j = 0; j < k; ++j) {
            cm.accumulate(static_cast<int>(i), static_cast<int>(j), rows[i][j]);
        }
    }
    return cm;
}

struct EvalArgs {
    std::string model;
    std::string data;
    std::string report;
    std::string matrix_in;
    int batch = 100;
};

int cmd_eval(const EvalArgs& a) {
    banknet::ConfusionMatrix cm(1);
    if (!a.matrix_in.empty()) {
        cm = parse_matrix_tsv(a.matrix_in);
    } else {
        if (a.model.empty() || a.data.empty()) {
            throw banknet::ConfigError("eval needs --model and --data (or --matrix-in)");
        }
        banknet::LoadedCheckpoint<float> ckpt = banknet::load_checkpoint<float>(a.model);
        const banknet::NetworkConfig& cfg = ckpt.net.config();
        banknet::Dataset raw = banknet::load_dataset(a.data);
        banknet::Dataset ds = banknet::resized(raw, cfg.input_h, cfg.input_w);
        banknet::SplitSpec spec;
        spec.seed = ckpt.split_seed;
        banknet::SplitResult splits = banknet::split(ds, spec);
        const banknet::Dataset& test = splits.test;

        cm = banknet::ConfusionMatrix(cfg.class_count);
        for (std::size_t start = 0; start < test.items.size();
             start += static_cast<std::size_t>(a.batch)) {
            const std::size_t end =
                std::min(test.items.size(), start + static_cast<std::size_t>(a.batch));
            std::vector<const banknet::Image*> images;
            for (std::size_t i = start; i < end; ++i) images.push_back(&test.items[i].image);
            banknet::Tensor<float> batch = banknet::detail::assemble_batch<float>(images);
            banknet::Prediction<float> pred = banknet::predict(ckpt.net, batch);
            for (std::size_t i = start; i < end; ++i) {
                cm.accumulate(test.items[i].label, pred.labels[i - start]);
            }
        }
    }
    banknet::MetricsReport rep = banknet::compute_report(cm);
    std::cout << banknet::render_text(cm, rep);
    if (!a.report.empty()) {
        std::ofstream out(a.report, std::ios::binary);
        if (!out) throw banknet::IoError("cannot write report: " + a.report);
        out << banknet::render_tsv(rep);
    }
    return kOk;
}

struct PredictArgs {
    std::string model;
    std::vector<std::string> images;
};

int cmd_predict(const PredictArgs& a) {
    banknet::LoadedCheckpoint<float> ckpt = banknet::load_checkpoint<float>(a.model);
    const banknet::NetworkConfig& cfg = ckpt.net.config();
    int failed = 0;
    for (const std::string& path : a.images) {
        try {
            banknet::Image img = banknet::load_ppm(path);
            img = banknet::resize_bilinear(img, cfg.input_h, cfg.input_w);
            banknet::Tensor<float> batch = banknet::detail::image_to_input<float>(img);
            banknet::Prediction<float> pred = banknet::predict(ckpt.net, batch);
            const int label = pred.labels[0];
            const float prob = pred.probabilities.data()[label];
            std::string denom = "-";
            if (label >= 0 && label < static_cast<int>(banknet::kDenominations.size())) {
                denom = std::to_string(banknet::kDenominations[static_cast<std::size_t>(label)]);
            }
            std::printf("%s\t%d\t%s\t%.4f\n", path.c_str(), label, denom.c_str(),
                        static_cast<double>(prob));
        } catch (const banknet::Error& e) {
            std::cerr << "error: " << path << ": " << e.what() << "\n";
            ++failed;
        }
    }
    return failed == 0 ? kOk : kPartial;
}

struct AugmentArgs {
    std::string input;
    std::string out_dir;
    int n = 5;
    std::uint64_t seed = 0;
    double threshold = 1.0;
};

int cmd_augment(const AugmentArgs& a) {
    namespace fs = std::filesystem;
    banknet::Image img = banknet::load_ppm(a.input);
    fs::create_directories(a.out_dir);
    banknet::AugmentConfig cfg;
    cfg.threshold = a.threshold;
    std::ostringstream sidecar;
    for (int i = 0; i < a.n; ++i) {
        banknet::Rng rng =
            banknet::make_rng(a.seed, {banknet::stream::kAugment, static_cast<std::uint64_t>(i)});
        banknet::AugmentResult res = banknet::apply_random(img, cfg, rng);
        char name[32];
        std::snprintf(name, sizeof(name), "aug_%03d.ppm", i);
        banknet::save_ppm(res.image, fs::path(a.out_dir) / name);
        if (res.applied.empty()) {
            sidecar << name << "\tnone\n";
        } else {
            sidecar << name;
            for (const auto& tech : res.applied) sidecar << '\t' << tech;
            sidecar << '\n';
        }
    }
    std::ofstream side(fs::path(a.out_dir) / "augment.tsv", std::ios::binary);
    if (!side) throw banknet::IoError("cannot write sidecar in " + a.out_dir);
    side << sidecar.str();
    std::cout << "wrote " << a.n << " variants to " << a.out_dir << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"banknet: banknote classification from scratch"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* g = app.add_subcommand("gen", "generate a synthetic banknote dataset");
    g->add_option("--out", gen.out, "output dataset directory")->required();
    g->add_option("--per-class", gen.per_class, "images per class")->capture_default_str();
    g->add_option("--classes", gen.classes, "number of classes (1..5)")->capture_default_str();
    g->add_option("--seed", gen.seed, "generator seed")->capture_default_str();

    TrainArgs train;
    CLI::App* t = app.add_subcommand("train", "train a model on a dataset directory");
    t->add_option("--data", train.data, "dataset root directory")->required();
    t->add_option("--out", train.out, "checkpoint output path")->required();
    t->add_option("--seed", train.seed, "run seed (init, split, shuffle, dropout, augment)")
        ->capture_default_str();
    t->add_option("--epochs", train.epochs, "training epochs")->capture_default_str();
    t->add_option("--batch", train.batch, "batch size")->capture_default_str();
    t->add_option("--lr", train.lr, "SGD learning rate")->capture_default_str();
    t->add_option("--threshold", train.threshold, "augmentation probability per image")
        ->capture_default_str();
    t->add_option("--image-size", train.image_size, "resize edge length fed to the network")
        ->capture_default_str();
    t->add_option("--width-scale", train.width_scale, "scale factor on layer widths")
        ->capture_default_str();

    EvalArgs eval;
    CLI::App* e = app.add_subcommand("eval", "evaluate a checkpoint on the held-out test split");
    e->add_option("--model", eval.model, "checkpoint path");
    e->add_option("--data", eval.data, "dataset root directory");
    e->add_option("--report", eval.report, "write TSV report to this path");
    e->add_option("--matrix-in", eval.matrix_in, "skip inference, compute metrics from a count matrix TSV");
    e->add_option("--batch", eval.batch, "evaluation batch size")->capture_default_str();

    PredictArgs pred;
    CLI::App* p = app.add_subcommand("predict", "classify individual PPM images");
    p->add_option("--model", pred.model, "checkpoint path")->required();
    p->add_option("images", pred.images, "image paths")->required();

    AugmentArgs aug;
    CLI::App* u = app.add_subcommand("augment", "write augmented variants of one image");
    u->add_option("input", aug.input, "input PPM image")->required();
    u->add_option("outdir", aug.out_dir, "output directory")->required();
    u->add_option("--n", aug.n, "number of variants")->capture_default_str();
    u->add_option("--seed", aug.seed, "augmentation seed")->capture_default_str();
    u->add_option("--threshold", aug.threshold, "probability of applying a technique")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return kBadInput;
    }

    try {
        if (g->parsed()) return cmd_gen(gen);
        if (t->parsed()) return cmd_train(train);
        if (e->parsed()) return cmd_eval(eval);
        if (p->parsed()) return cmd_predict(pred);
        if (u->parsed()) return cmd_augment(aug);
    } catch (const banknet::DivergedError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kDiverged;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
