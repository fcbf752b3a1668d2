from approxnash.cli import main

main()
