from moonshine.cli import main

main()
