#include "ucutlass/parser.hpp"

#include <set>

#include "ucutlass/token.hpp"

namespace ucutlass {

namespace {

class Parser {
  public:
    explicit Parser(const std::string& source)
        : source_(source), tokens_(tokenize(source)) {}

    DslProgram Run() {
        DslProgram program;
        program.source_text = source_;
        if (Peek().is(TokenKind::Ident) && Peek().text == "pipeline") {
            program.root = ParsePipeline();
        } else {
            program.root = ParseKernelExpr();
        }
        Expect(TokenKind::End, "end of program");
        return program;
    }

  private:
    const Token& Peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    const Token& Consume() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    const Token& Expect(TokenKind kind, const std::string& what) {
        if (!Peek().is(kind)) {
            throw ParseError("unexpected " + Describe(Peek()), Peek().span, what);
        }
        return Consume();
    }

    static std::string Describe(const Token& token) {
        if (token.is(TokenKind::End)) return "end of input";
        return std::string(to_string(token.kind)) + " '" + token.text + "'";
    }

    // value := IDENT | INT | "true" | "false"
    Value ParseValue() {
        const Token& token = Peek();
        if (token.is(TokenKind::Int)) {
            Consume();
            return Value{token.value};
        }
        if (token.is(TokenKind::Ident)) {
            Consume();
            if (token.text == "true") return Value{true};
            if (token.text == "false") return Value{false};
            return Value{token.text};
        }
        throw ParseError("unexpected " + Describe(token), token.span,
                         "identifier, integer, or boolean value");
    }

    // arg := (IDENT "=")? value
    Arg ParseArg() {
        Arg arg;
        arg.span = Peek().span;
        if (Peek().is(TokenKind::Ident) && Peek(1).is(TokenKind::Equals)) {
            arg.key = Consume().text;
            Consume();  // '='
        }
        arg.value = ParseValue();
        return arg;
    }

    // arglist := "(" (arg ("," arg)*)? ")", with unique keys
    std::vector<Arg> ParseArgList(const std::string& owner) {
        Expect(TokenKind::LParen, "'('");
        std::vector<Arg> args;
        if (!Peek().is(TokenKind::RParen)) {
            for (;;) {
                args.push_back(ParseArg());
                if (Peek().is(TokenKind::Comma)) {
                    Consume();
                    continue;
                }
                break;
            }
        }
        Expect(TokenKind::RParen, "')'");
        std::set<std::string> seen;
        for (const Arg& arg : args) {
            if (arg.key && !seen.insert(*arg.key).second) {
                throw ParseError("duplicate argument key '" + *arg.key + "' in " + owner,
                                 arg.span);
            }
        }
        return args;
    }

    Binding ParseBinding() {
        Span span = Peek().span;
        Expect(TokenKind::Dot, "'.'");
        const Token& name = Expect(TokenKind::Ident, "binding name");
        auto binding_name = binding_name_from_string(name.text);
        if (!binding_name) {
            throw ParseError("unknown binding '." + name.text + "'", name.span);
        }
        Binding binding;
        binding.name = *binding_name;
        binding.span = span;
        binding.args = ParseArgList("." + name.text);
        return binding;
    }

    EpilogueOp ParseEpilogueOp() {
        const Token& name = Expect(TokenKind::Ident, "epilogue name");
        auto epi_name = epilogue_name_from_string(name.text);
        if (!epi_name) {
            throw ParseError("unknown epilogue '" + name.text + "'", name.span);
        }
        EpilogueOp op;
        op.name = *epi_name;
        op.span = name.span;
        if (op.name == EpilogueName::custom) {
            ParseCustomBody(op);
        } else {
            op.args = ParseArgList(name.text);
        }
        return op;
    }

    // custom := "custom" "(" STRING ("," "inputs" "=" "{" ident "=" ident
    //           ("," ident "=" ident)* "}")? ")"
    void ParseCustomBody(EpilogueOp& op) {
        Expect(TokenKind::LParen, "'('");
        const Token& expr = Expect(TokenKind::String, "quoted expression");
        op.custom_expr = expr.text;
        if (Peek().is(TokenKind::Comma)) {
            Consume();
            const Token& key = Expect(TokenKind::Ident, "'inputs'");
            if (key.text != "inputs") {
                throw ParseError("unexpected argument '" + key.text + "' to custom", key.span,
                                 "'inputs'");
            }
            Expect(TokenKind::Equals, "'='");
            Expect(TokenKind::LBrace, "'{'");
            std::set<std::string> seen;
            for (;;) {
                const Token& input_name = Expect(TokenKind::Ident, "input name");
                Expect(TokenKind::Equals, "'='");
                const Token& input_value = Expect(TokenKind::Ident, "input identifier");
                if (!seen.insert(input_name.text).second) {
                    throw ParseError("duplicate input name '" + input_name.text + "'",
                                     input_name.span);
                }
                op.custom_inputs.emplace_back(input_name.text, input_value.text);
                if (Peek().is(TokenKind::Comma)) {
                    Consume();
                    continue;
                }
                break;
            }
            Expect(TokenKind::RBrace, "'}'");
        }
        Expect(TokenKind::RParen, "')'");
    }

    KernelExpr ParseKernelExpr() {
        const Token& name = Expect(TokenKind::Ident, "operator name");
        auto op_name = op_name_from_string(name.text);
        if (!op_name) {
            throw ParseError("unknown operator '" + name.text + "'", name.span);
        }
        KernelExpr expr;
        expr.op = *op_name;
        expr.span = name.span;
        Expect(TokenKind::LParen, "'('");
        Expect(TokenKind::RParen, "')'");

        std::set<BindingName> seen;
        while (Peek().is(TokenKind::Dot)) {
            Binding binding = ParseBinding();
            if (!seen.insert(binding.name).second) {
                throw ParseError(
                    "duplicate binding '." + std::string(to_string(binding.name)) + "'",
                    binding.span);
            }
            expr.bindings.push_back(std::move(binding));
        }
        while (Peek().is(TokenKind::Chain)) {
            Consume();
            expr.epilogue.push_back(ParseEpilogueOp());
        }
        return expr;
    }

    TransposeStage ParseTransposeStage() {
        const Token& name = Expect(TokenKind::Ident, "'transpose'");
        TransposeStage stage;
        stage.span = name.span;
        stage.args = ParseArgList("transpose");
        return stage;
    }

    PipelineExpr ParsePipeline() {
        const Token& head = Expect(TokenKind::Ident, "'pipeline'");
        PipelineExpr pipe;
        pipe.span = head.span;
        Expect(TokenKind::LParen, "'('");

        bool have_kernel = false;
        for (;;) {
            if (Peek().is(TokenKind::Ident) && Peek().text == "transpose") {
                TransposeStage stage = ParseTransposeStage();
                (have_kernel ? pipe.post : pipe.pre).push_back(std::move(stage));
            } else if (Peek().is(TokenKind::Ident)) {
                if (have_kernel) {
                    throw ParseError("pipeline may contain exactly one kernel stage",
                                     Peek().span);
                }
                pipe.kernel = ParseKernelExpr();
                have_kernel = true;
            } else {
                throw ParseError("unexpected " + Describe(Peek()), Peek().span,
                                 "pipeline stage");
            }
            if (Peek().is(TokenKind::Comma)) {
                Consume();
                continue;
            }
            break;
        }
        Expect(TokenKind::RParen, "')'");
        if (!have_kernel) {
            throw ParseError("pipeline requires exactly one kernel stage", pipe.span);
        }
        return pipe;
    }

    const std::string& source_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

DslProgram parse(const std::string& source) { return Parser(source).Run(); }

}  // namespace ucutlass
