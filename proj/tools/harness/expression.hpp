#pragma once

#include <memory>
#include <string>

namespace fronttrack::harness {

// Arithmetic in one variable x: + - * / ^, unary minus, numbers, pi, and the functions
// sin cos tan exp log sqrt abs tanh sign step min max clamp.
class Expression {
public:
    // Throws Error(InvalidArgument) on syntax errors and unknown names.
    static Expression parse(const std::string& text);

    double operator()(double x) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

} // namespace fronttrack::harness
