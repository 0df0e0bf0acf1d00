#include "ucutlass/hash.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <sstream>

namespace ucutlass {

namespace {

// Escapes payload text embedded in a single serialization line so that the
// encoding stays injective: backslash, semicolon, and newline are reserved.
std::string EscapePayload(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case ';': out += "\\s"; break;
            case '\n': out += "\\n"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

// Values carry a one-letter type prefix so that i:1 and s:1 stay distinct.
std::string EncodeValue(const Value& value) {
    if (value.is_int()) return "i:" + std::to_string(value.integer());
    if (value.is_bool()) return std::string("b:") + (value.boolean() ? "true" : "false");
    return "s:" + EscapePayload(value.ident());
}

void SerializeKernelFields(std::ostringstream& out, const KernelConfig& c,
                           const std::string& prefix) {
    out << prefix << "op=" << to_string(c.op_kind) << "\n";
    out << prefix << "arch=" << to_string(c.arch) << "\n";
    out << prefix << "dtype.input=" << to_string(c.dtypes.input) << "\n";
    out << prefix << "dtype.acc=" << to_string(c.dtypes.acc) << "\n";
    out << prefix << "dtype.output=" << to_string(c.dtypes.output) << "\n";
    out << prefix << "layout.A=" << to_string(c.layouts.a) << "\n";
    out << prefix << "layout.B=" << to_string(c.layouts.b) << "\n";
    out << prefix << "layout.C=" << to_string(c.layouts.c) << "\n";
    if (c.tile) {
        out << prefix << "tile=" << c.tile->m << "," << c.tile->n << "," << c.tile->k << "\n";
    } else {
        out << prefix << "tile=-\n";
    }
    if (c.threadblock_shape) {
        out << prefix << "tbs=" << c.threadblock_shape->m << "," << c.threadblock_shape->n
            << "," << c.threadblock_shape->k << "\n";
    } else {
        out << prefix << "tbs=-\n";
    }
    if (c.cluster) {
        out << prefix << "cluster=" << c.cluster->x << "," << c.cluster->y << ","
            << c.cluster->z << "\n";
    } else {
        out << prefix << "cluster=-\n";
    }
    out << prefix << "stages=" << c.stages << "\n";
    out << prefix << "align.A=" << c.alignment.a << "\n";
    out << prefix << "align.B=" << c.alignment.b << "\n";
    out << prefix << "align.C=" << c.alignment.c << "\n";
    if (c.scheduler) {
        out << prefix << "sched=" << to_string(c.scheduler->kernel) << ","
            << to_string(c.scheduler->epilogue) << "\n";
    } else {
        out << prefix << "sched=-\n";
    }
    if (c.swizzle) {
        out << prefix << "swizzle=" << *c.swizzle << "\n";
    } else {
        out << prefix << "swizzle=-\n";
    }
    if (c.iterator) {
        out << prefix << "iterator=" << to_string(*c.iterator) << "\n";
    } else {
        out << prefix << "iterator=-\n";
    }
    if (c.split_k) {
        out << prefix << "splitk=" << c.split_k->slices << "\n";
    } else {
        out << prefix << "splitk=-\n";
    }
    if (c.operand_swap) {
        out << prefix << "opswap=" << (*c.operand_swap ? "1" : "0") << "\n";
    } else {
        out << prefix << "opswap=-\n";
    }
    out << prefix << "epi.count=" << c.epilogue.size() << "\n";
    for (std::size_t i = 0; i < c.epilogue.size(); ++i) {
        const EpilogueNode& node = c.epilogue[i];
        out << prefix << "epi." << i << "=" << to_string(node.name);
        for (const auto& [key, value] : node.params) {  // std::map: keys sorted
            out << ";" << EscapePayload(key) << "=" << EncodeValue(value);
        }
        if (node.name == EpilogueName::custom) {
            out << ";expr=" << EscapePayload(node.custom_expr.value_or(""));
            auto inputs = node.custom_inputs;
            std::sort(inputs.begin(), inputs.end());
            out << ";inputs=";
            for (std::size_t j = 0; j < inputs.size(); ++j) {
                if (j) out << ",";
                out << EscapePayload(inputs[j].first) << ":"
                    << EscapePayload(inputs[j].second);
            }
        }
        out << "\n";
    }
}

void SerializeTransforms(std::ostringstream& out, const char* label,
                         const std::vector<TransformStage>& stages) {
    out << label << ".count=" << stages.size() << "\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
        out << label << "." << i << "=transpose,";
        out << (stages[i].convert_dtype ? to_string(*stages[i].convert_dtype) : "-");
        out << "\n";
    }
}

}  // namespace

std::string canonical_serialize(const KernelConfig& config) {
    std::ostringstream out;
    out << "UCL1\n";
    out << "kind=kernel\n";
    SerializeKernelFields(out, config, "");
    return out.str();
}

std::string canonical_serialize(const PipelineConfig& config) {
    std::ostringstream out;
    out << "UCL1\n";
    out << "kind=pipeline\n";
    SerializeTransforms(out, "pre", config.pre_transforms);
    SerializeKernelFields(out, config.kernel, "k.");
    SerializeTransforms(out, "post", config.post_transforms);
    return out.str();
}

std::string canonical_serialize(const AnyConfig& config) {
    if (std::holds_alternative<KernelConfig>(config)) {
        return canonical_serialize(std::get<KernelConfig>(config));
    }
    return canonical_serialize(std::get<PipelineConfig>(config));
}

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int digest_len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest.data(), &digest_len, EVP_sha256(),
               nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(digest_len * 2);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

namespace {

ConfigHash HashBytes(const std::string& bytes) {
    ConfigHash hash;
    hash.hex = sha256_hex(bytes);
    hash.name_space = "ucutlass_" + hash.hex.substr(0, 16);
    return hash;
}

}  // namespace

ConfigHash config_hash(const KernelConfig& config) {
    return HashBytes(canonical_serialize(config));
}
ConfigHash config_hash(const PipelineConfig& config) {
    return HashBytes(canonical_serialize(config));
}
ConfigHash config_hash(const AnyConfig& config) {
    return HashBytes(canonical_serialize(config));
}

}  // namespace ucutlass
