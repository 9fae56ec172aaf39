#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "nmc/harness.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nmc::ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& report, bool csv, const std::string& out_path) {
    std::string text = csv ? nmc::report_csv(report) : report;
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        out << text;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-malleable code toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    bool csv = false;
    app.add_flag("--csv", csv, "flatten the report to key,value CSV");
    app.add_option("--out", out_path, "write the report to a file instead of stdout");

    auto add_config = [&](CLI::App* sub) {
        sub->fallthrough();  // let --csv / --out appear after the subcommand
        sub->add_option("--config,config", config_path, "JSON config file")->required();
    };

    CLI::App* params = app.add_subcommand("params", "evaluate feasibility or a bound formula");
    add_config(params);
    CLI::App* switching = app.add_subcommand("switching", "restriction simplification experiment");
    add_config(switching);
    CLI::App* nm = app.add_subcommand("nm-experiment", "real-vs-simulated tampering experiment");
    add_config(nm);
    CLI::App* hybrid = app.add_subcommand("hybrid-replay", "split-state equivalence-chain replay");
    add_config(hybrid);

    std::string pipeline_path, message, codeword, hex;
    size_t hex_len = 0;
    uint64_t seed = 1;
    CLI::App* enc = app.add_subcommand("encode", "encode a message through a pipeline");
    enc->fallthrough();
    enc->add_option("--pipeline", pipeline_path, "pipeline JSON file")->required();
    enc->add_option("--message", message, "message bits, e.g. 0110")->required();
    enc->add_option("--seed", seed, "randomness seed");
    CLI::App* dec = app.add_subcommand("decode", "decode a codeword through a pipeline");
    dec->fallthrough();
    dec->add_option("--pipeline", pipeline_path, "pipeline JSON file")->required();
    dec->add_option("--codeword", codeword, "codeword bits");
    dec->add_option("--hex", hex, "codeword as hex (with --len)");
    dec->add_option("--len", hex_len, "codeword bit length for --hex");

    CLI11_PARSE(app, argc, argv);

    try {
        nmc::ExperimentOutcome outcome;
        if (params->parsed()) {
            outcome = nmc::run_params_json(slurp(config_path));
        } else if (switching->parsed()) {
            outcome = nmc::run_switching_json(slurp(config_path));
        } else if (nm->parsed()) {
            outcome = nmc::run_nm_json(slurp(config_path));
        } else if (hybrid->parsed()) {
            outcome = nmc::run_hybrid_json(slurp(config_path));
        } else if (enc->parsed()) {
            nmc::AcdPipeline pl = nmc::acd_pipeline_from_json(slurp(pipeline_path));
            nmc::BitVec msg = nmc::BitVec::from_string(message);
            nmc::RandomStream rs = nmc::RandomStream::fork(seed, 0);
            nmc::BitVec c = pl.coder.encode(msg, rs);
            nlohmann::json j = {{"kind", "encode"},
                                {"message", msg.to_string()},
                                {"n", c.size()},
                                {"codeword_hex", c.to_hex()}};
            outcome = {true, j.dump(2)};
        } else if (dec->parsed()) {
            nmc::AcdPipeline pl = nmc::acd_pipeline_from_json(slurp(pipeline_path));
            nmc::BitVec c = hex.empty() ? nmc::BitVec::from_string(codeword)
                                        : nmc::BitVec::from_hex(hex, hex_len);
            std::optional<nmc::BitVec> msg = pl.coder.decode(c);
            nlohmann::json j = {{"kind", "decode"},
                                {"outcome", nmc::outcome_label(msg)},
                                {"message", msg ? msg->to_string() : "bottom"}};
            outcome = {true, j.dump(2)};
        }
        emit(outcome.report_json, csv, out_path);
        return outcome.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
