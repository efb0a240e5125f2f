// Placeholder until the full acceptance suite lands.
int main() { return 1; }
