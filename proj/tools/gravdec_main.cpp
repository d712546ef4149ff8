// Placeholder entry point; command wiring lands with the runner layer.
int main() { return 0; }
